#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plent/branch.hpp"
#include "plent/entropy.hpp"
#include "plent/families.hpp"
#include "plent/invlim.hpp"
#include "plent/serialize.hpp"

namespace py = pybind11;
using namespace plent;

// Rat <-> fractions.Fraction; ints and "a/b" strings are accepted on the way in.
namespace pybind11::detail {
template <>
struct type_caster<mpq_class> {
  PYBIND11_TYPE_CASTER(mpq_class, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src) return false;
    try {
      if (py::isinstance<py::str>(src)) {
        value = parse_rat(src.cast<std::string>());
        return true;
      }
      if (py::isinstance<py::bool_>(src)) return false;
      if (py::isinstance<py::int_>(src)) {
        value = mpq_class(py::str(src).cast<std::string>());
        return true;
      }
      if (py::hasattr(src, "numerator") && py::hasattr(src, "denominator") && !PyFloat_Check(src.ptr())) {
        std::string num = py::str(src.attr("numerator")), den = py::str(src.attr("denominator"));
        value = mpq_class(num + "/" + den);
        value.canonicalize();
        return true;
      }
    } catch (const std::exception&) {
      return false;
    }
    return false;
  }

  static handle cast(const mpq_class& r, return_value_policy, handle) {
    auto to_int = [](const mpz_class& z) {
      return py::reinterpret_steal<py::object>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
    };
    py::object frac = py::module_::import("fractions").attr("Fraction");
    return frac(to_int(r.get_num()), to_int(r.get_den())).release();
  }
};
}  // namespace pybind11::detail

namespace {

py::object as_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
  return parse_json(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact entropy tools for PL interval maps, relations and inverse limits";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CompositionError>(m, "CompositionError", PyExc_RuntimeError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  py::class_<Interval>(m, "Interval")
      .def(py::init([](const Rat& lo, const Rat& hi) { return Interval{lo, hi}; }))
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def("__eq__", &Interval::operator==)
      .def("__repr__", [](const Interval& iv) { return to_string(iv); });

  py::class_<PLMap>(m, "PLMap")
      .def(py::init([](const std::vector<std::pair<Rat, Rat>>& pts) {
        std::vector<Point> bp;
        for (const auto& [x, y] : pts) bp.push_back({x, y});
        return PLMap(std::move(bp));
      }))
      .def("__call__", [](const PLMap& f, const Rat& x) { return f(x); })
      .def_property_readonly("breakpoints",
                             [](const PLMap& f) {
                               std::vector<std::pair<Rat, Rat>> out;
                               for (const auto& p : f.breakpoints()) out.emplace_back(p.x, p.y);
                               return out;
                             })
      .def("lap_count", [](const PLMap& f) { return lap_count(f); })
      .def("to_json", [](const PLMap& f) { return as_py(to_json(f)); })
      .def_static("from_json", [](const py::object& o) { return plmap_from_json(from_py(o)); });

  m.def("tent", &tent);
  m.def("shifted_fold", &shifted_fold);
  m.def("fold_partner", &fold_partner);
  m.def("plateau_R", &plateau_R);
  m.def("slope_map", &slope_map);
  m.def("middle_third_tilde", &middle_third_tilde);
  m.def("family", [](const std::string& spec) { return build(parse_family(spec)); },
        "Build a map from a short spec such as 'tent:3' or 'tilde:tent:5'.");
  m.def("compose", [](const PLMap& f, const PLMap& g) { return compose(f, g); });
  m.def("iterate", [](const PLMap& f, int k) { return iterate(f, k); });
  m.def("map_equals", &map_equals);

  py::class_<PLRelation>(m, "PLRelation")
      .def("__len__", &PLRelation::size)
      .def("fiber", [](const PLRelation& r, const Rat& x) { return evaluate_at(r, x); })
      .def("image", [](const PLRelation& r, const Interval& a) { return image_of(r, a); })
      .def("id", [](const PLRelation& r) { return relation_id(r); })
      .def("to_json", [](const PLRelation& r) { return as_py(to_json(r)); })
      .def_static("from_json", [](const py::object& o) { return relation_from_json(from_py(o)); });

  m.def("graph_of", &graph_of);
  m.def("diagonal", &diagonal);
  m.def("inverse_rel", &inverse_rel);
  m.def("rel_union", &rel_union);
  m.def("compose_rel", [](const PLRelation& s, const PLRelation& r) { return compose_rel(s, r); });
  m.def("param_graph", &param_graph);
  m.def("rel_equals", &rel_equals);
  m.def("strongly_commutes", &strongly_commutes);
  m.def("commutes", &commutes);

  m.def("branch_counts",
        [](const PLMap& f, const PLMap& g, int k_max) {
          auto bc = branch_counts(f, g, k_max);
          std::vector<std::size_t> out;
          for (const auto& row : bc.rows) out.push_back(row.count);
          return out;
        },
        py::arg("f"), py::arg("g"), py::arg("k_max"));
  m.def("find_horseshoe",
        [](const PLRelation& r, std::size_t N) -> py::object {
          auto c = find_horseshoe(r, N);
          if (!c) return py::none();
          return py::cast(c->intervals);
        },
        py::arg("r"), py::arg("N"));
  m.def("verify_horseshoe", &verify_horseshoe);
  m.def("bracket",
        [](int n, int m_, int k_max) { return as_py(to_json(bracket_theorem_main(n, m_, k_max, false))); },
        py::arg("n"), py::arg("m"), py::arg("k_max"));
  m.def("lap_growth", [](const PLMap& f, int n_max) { return as_py(to_json(entropy_lap_growth(f, n_max))); });
  m.def("appendix_report",
        [](const std::vector<int>& n_seq, const Rat& s, int k_max, int k_b) {
          return as_py(to_json(appendix_report(n_seq, s, k_max, k_b)));
        },
        py::arg("n_seq"), py::arg("s"), py::arg("k_max"), py::arg("k_b") = 6);
  m.def("shift_estimate",
        [](const PLMap& f, int depth, int n, double eps, const Rat& grid) {
          for (const auto& r : entropy_estimate_diagonal(shift_system(f), depth, n, eps, grid))
            if (r.level == -1 && r.n == n) return r.estimate;
          return 0.0;
        },
        py::arg("f"), py::arg("depth"), py::arg("n"), py::arg("eps"), py::arg("grid"));
}
