#include "plent/serialize.hpp"

#include <ostream>

namespace plent {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

std::string str(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string key_path(const std::string& path, const char* key) { return path + "." + key; }

}  // namespace

Json to_json(const Rat& r) { return Json::array({r.get_num().get_str(), r.get_den().get_str()}); }

Rat rat_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const ParseError& e) {
      bad(path, e.what());
    }
  }
  if (!j.is_array() || j.size() != 2) bad(path, "expected [\"num\", \"den\"]");
  mpz_class num, den;
  auto digits = [&](const Json& v, mpz_class& out, const std::string& p) {
    std::string s = v.is_string() ? v.get<std::string>()
                    : v.is_number_integer() ? std::to_string(v.get<long long>())
                                            : std::string();
    if (s.empty() || out.set_str(s, 10) != 0) bad(p, "not an integer: " + v.dump());
  };
  digits(j[0], num, index_path(path, 0));
  digits(j[1], den, index_path(path, 1));
  if (den == 0) bad(index_path(path, 1), "denominator is zero");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Json to_json(const Interval& iv) { return Json::array({to_json(iv.lo), to_json(iv.hi)}); }

Interval interval_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [lo, hi]");
  Interval iv{rat_from_json(j[0], index_path(path, 0)), rat_from_json(j[1], index_path(path, 1))};
  if (iv.hi < iv.lo) bad(path, "interval with lo > hi");
  return iv;
}

Json to_json(const PLMap& f) {
  Json bp = Json::array();
  for (const auto& p : f.breakpoints()) bp.push_back(Json::array({to_json(p.x), to_json(p.y)}));
  return Json{{"breakpoints", bp}};
}

PLMap plmap_from_json(const Json& j, const std::string& path) {
  std::string p = key_path(path, "breakpoints");
  const Json& arr = array_at(field(j, "breakpoints", path), p);
  std::vector<Point> bp;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_array() || arr[i].size() != 2) bad(index_path(p, i), "expected [x, y]");
    bp.push_back({rat_from_json(arr[i][0], index_path(index_path(p, i), 0)), rat_from_json(arr[i][1], index_path(index_path(p, i), 1))});
  }
  try {
    return PLMap(std::move(bp));
  } catch (const DomainError& e) {
    bad(path, e.what());
  }
}

Json to_json(const Arc& a) {
  Json j;
  j["kind"] = a.kind == ArcKind::Mono ? "mono" : a.kind == ArcKind::Horizontal ? "horizontal" : "vertical";
  j["dom"] = to_json(a.dom());
  j["ran"] = to_json(a.ran());
  j["direction"] = a.direction();
  if (a.kind == ArcKind::Mono) j["homeo"] = to_json(a.h);
  return j;
}

Arc arc_from_json(const Json& j, const std::string& path) {
  std::string kind = str(field(j, "kind", path), key_path(path, "kind"));
  Interval dom = interval_from_json(field(j, "dom", path), key_path(path, "dom"));
  Interval ran = interval_from_json(field(j, "ran", path), key_path(path, "ran"));
  try {
    if (kind == "mono") {
      PLMap h = plmap_from_json(field(j, "homeo", path), key_path(path, "homeo"));
      Arc a = Arc::mono(h);
      if (!(a.dom() == dom) || !(a.ran() == ran)) bad(path, "dom/ran disagree with homeo");
      return a;
    }
    if (kind == "horizontal") {
      if (!ran.degenerate()) bad(key_path(path, "ran"), "horizontal arc needs a point range");
      return Arc::horizontal(dom, ran.lo);
    }
    if (kind == "vertical") {
      if (!dom.degenerate()) bad(key_path(path, "dom"), "vertical arc needs a point domain");
      return Arc::vertical(dom.lo, ran);
    }
  } catch (const HomeoError& e) {
    bad(path, e.what());
  }
  bad(key_path(path, "kind"), "unknown arc kind '" + kind + "'");
}

Json to_json(const PLRelation& r) {
  Json arcs = Json::array();
  for (const auto& a : r.arcs()) arcs.push_back(to_json(a));
  return Json{{"arcs", arcs}};
}

PLRelation relation_from_json(const Json& j, const std::string& path) {
  std::string p = key_path(path, "arcs");
  const Json& arr = array_at(field(j, "arcs", path), p);
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < arr.size(); ++i) arcs.push_back(arc_from_json(arr[i], index_path(p, i)));
  return PLRelation(std::move(arcs));
}

Json to_json(const BranchFamily& fam) {
  Json arcs = Json::array(), prov = Json::array();
  for (const auto& a : fam.arcs) arcs.push_back(to_json(a));
  for (const auto& [i, k] : fam.provenance) prov.push_back(Json::array({i, k}));
  return Json{{"level", fam.level}, {"arcs", arcs}, {"provenance", prov}, {"skipped", fam.skipped}};
}

BranchFamily branch_family_from_json(const Json& j, const std::string& path) {
  BranchFamily fam;
  fam.level = integer(field(j, "level", path), key_path(path, "level"));
  const Json& arcs = array_at(field(j, "arcs", path), key_path(path, "arcs"));
  const Json& prov = array_at(field(j, "provenance", path), key_path(path, "provenance"));
  if (arcs.size() != prov.size()) bad(path, "arcs and provenance differ in length");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    fam.arcs.push_back(arc_from_json(arcs[i], index_path(key_path(path, "arcs"), i)));
    std::string pp = index_path(key_path(path, "provenance"), i);
    if (!prov[i].is_array() || prov[i].size() != 2) bad(pp, "expected [i, j]");
    fam.provenance.push_back({integer(prov[i][0], index_path(pp, 0)), integer(prov[i][1], index_path(pp, 1))});
  }
  if (j.contains("skipped")) fam.skipped = integer(j["skipped"], key_path(path, "skipped"));
  return fam;
}

Json to_json(const BranchCounts& bc) {
  Json rows = Json::array();
  for (const auto& r : bc.rows)
    rows.push_back({{"k", r.k},
                    {"count", r.count},
                    {"log_growth", r.log_growth},
                    {"lower_bound", r.lower_bound},
                    {"upper_bound", r.upper_bound},
                    {"within_bound", r.within_bound}});
  return Json{{"n", bc.n}, {"complete", bc.complete}, {"rows", rows}};
}

Json to_json(const HorseshoeCert& c) {
  Json iv = Json::array();
  for (const auto& a : c.intervals) iv.push_back(to_json(a));
  return Json{{"N", c.N}, {"intervals", iv}, {"relation_id", c.relation_id}};
}

HorseshoeCert cert_from_json(const Json& j, const std::string& path) {
  HorseshoeCert c;
  const Json& iv = array_at(field(j, "intervals", path), key_path(path, "intervals"));
  for (std::size_t i = 0; i < iv.size(); ++i)
    c.intervals.push_back(interval_from_json(iv[i], index_path(key_path(path, "intervals"), i)));
  c.N = c.intervals.size();
  if (j.contains("N") && integer(j["N"], key_path(path, "N")) != static_cast<int>(c.N))
    bad(key_path(path, "N"), "N disagrees with the interval count");
  if (j.contains("relation_id")) c.relation_id = str(j["relation_id"], key_path(path, "relation_id"));
  return c;
}

Json to_json(const IterateBound& b) {
  Json certs = Json::array();
  for (const auto& c : b.certs) certs.push_back(to_json(c));
  return Json{{"sizes", b.sizes}, {"running", b.running}, {"best", b.best}, {"certs", certs}};
}

Json to_json(const BracketReport& rep) {
  Json certs = Json::array();
  for (const auto& c : rep.certs) certs.push_back(to_json(c));
  return Json{{"n", rep.n},
              {"m", rep.m},
              {"k_max", rep.k_max},
              {"target", rep.target},
              {"lower", rep.lower},
              {"upper", rep.upper},
              {"horseshoe_sizes", rep.horseshoe_sizes},
              {"branch_counts", rep.branch_counts},
              {"certs", certs},
              {"failures", rep.failures},
              {"ok", rep.ok()}};
}

Json to_json(const FamilySpec& s) {
  Json j{{"kind", s.kind}, {"params", s.params}};
  if (!s.seq.empty()) j["seq"] = s.seq;
  if (s.inner) j["inner"] = to_json(*s.inner);
  return j;
}

FamilySpec family_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_family(j.get<std::string>());
    } catch (const std::exception& e) {
      bad(path, e.what());
    }
  }
  FamilySpec s;
  s.kind = str(field(j, "kind", path), key_path(path, "kind"));
  if (j.contains("params")) {
    const Json& ps = j["params"];
    if (!ps.is_object()) bad(key_path(path, "params"), "expected an object");
    for (auto it = ps.begin(); it != ps.end(); ++it)
      s.params[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
  }
  if (j.contains("seq")) {
    const Json& sq = array_at(j["seq"], key_path(path, "seq"));
    for (std::size_t i = 0; i < sq.size(); ++i) s.seq.push_back(integer(sq[i], index_path(key_path(path, "seq"), i)));
  }
  if (j.contains("inner"))
    s.inner = std::make_shared<FamilySpec>(family_from_json(j["inner"], key_path(path, "inner")));
  return s;
}

Json to_json(const SystemSpec& s) {
  Json j{{"kind", s.kind}};
  if (s.f) j["f"] = to_json(*s.f);
  if (s.g) j["g"] = to_json(*s.g);
  if (s.kind == "appendix") {
    j["n_seq"] = s.n_seq;
    j["s"] = to_json(s.s);
  }
  return j;
}

SystemSpec system_from_json(const Json& j, const std::string& path) {
  SystemSpec s;
  s.kind = str(field(j, "kind", path), key_path(path, "kind"));
  if (s.kind == "constant" || s.kind == "shift") {
    s.f = std::make_shared<FamilySpec>(family_from_json(field(j, "f", path), key_path(path, "f")));
    if (s.kind == "constant")
      s.g = std::make_shared<FamilySpec>(family_from_json(field(j, "g", path), key_path(path, "g")));
  } else if (s.kind == "appendix") {
    const Json& sq = array_at(field(j, "n_seq", path), key_path(path, "n_seq"));
    for (std::size_t i = 0; i < sq.size(); ++i) s.n_seq.push_back(integer(sq[i], index_path(key_path(path, "n_seq"), i)));
    s.s = rat_from_json(field(j, "s", path), key_path(path, "s"));
  } else {
    bad(key_path(path, "kind"), "unknown system kind '" + s.kind + "'");
  }
  return s;
}

DiagonalSystem build_system(const SystemSpec& s) {
  if (s.kind == "constant") return constant_system(build(*s.f), build(*s.g));
  if (s.kind == "shift") return shift_system(build(*s.f));
  if (s.kind == "appendix") return appendix_system(s.n_seq, s.s);
  throw ParseError("unknown system kind '" + s.kind + "'");
}

Json to_json(const TruncatedPoint& p) {
  Json c = Json::array();
  for (const auto& x : p.coords) c.push_back(to_json(x));
  return Json{{"coords", c}};
}

TruncatedPoint point_from_json(const Json& j, const std::string& path) {
  TruncatedPoint p;
  const Json& c = array_at(field(j, "coords", path), key_path(path, "coords"));
  for (std::size_t i = 0; i < c.size(); ++i) p.coords.push_back(rat_from_json(c[i], index_path(key_path(path, "coords"), i)));
  return p;
}

Json to_json(const AppendixReport& rep) {
  Json levels = Json::array();
  for (const auto& lv : rep.levels) {
    Json blocks = Json::array();
    for (const auto& b : lv.blocks)
      blocks.push_back({{"block", b.block},
                        {"kind", b.kind},
                        {"arcs", b.arcs},
                        {"cert", to_json(b.cert)},
                        {"lower", b.lower},
                        {"branch", b.branch},
                        {"upper", b.upper}});
    levels.push_back({{"k", lv.k},
                      {"n_k", lv.n_k},
                      {"compatible", lv.compatible},
                      {"target", lv.target},
                      {"k_b", lv.k_b},
                      {"lower", lv.lower},
                      {"upper", lv.upper},
                      {"first_block_lower", lv.first_block_lower},
                      {"blocks", blocks}});
  }
  return Json{{"s", to_json(rep.s)},
              {"n_seq", rep.n_seq},
              {"levels", levels},
              {"lift_error_level", rep.lift_error_level},
              {"lift_message", rep.lift_message}};
}

Json to_json(const LapGrowth& g) {
  Json j{{"laps", g.laps}, {"terms", g.terms}, {"constant_slope", g.constant_slope}};
  if (g.constant_slope) {
    j["slope"] = to_json(g.slope);
    j["exact"] = g.exact;
  }
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_csv(std::ostream& os, const EstimateTable& t) {
  os << "n,eps,grid,s_count,r_count,estimate\n";
  for (const auto& r : t.rows)
    os << r.n << ',' << r.eps << ',' << to_string(r.grid) << ',' << r.s_count << ','
       << r.r_count << ',' << r.estimate << '\n';
}

void write_csv(std::ostream& os, const std::vector<DiagonalRow>& rows) {
  os << "level,n,eps,estimate,tail_bound,count\n";
  for (const auto& r : rows)
    os << r.level << ',' << r.n << ',' << r.eps << ',' << r.estimate << ',' << r.tail_bound << ','
       << r.count << '\n';
}

void write_csv(std::ostream& os, const BranchCounts& bc) {
  os << "k,count,log_growth,lower_bound,upper_bound,within_bound\n";
  for (const auto& r : bc.rows)
    os << r.k << ',' << r.count << ',' << r.log_growth << ',' << r.lower_bound << ','
       << r.upper_bound << ',' << (r.within_bound ? 1 : 0) << '\n';
}

void write_csv(std::ostream& os, const BracketReport& rep) {
  os << "k,lower,upper,target,horseshoe,branch_count\n";
  for (std::size_t i = 0; i < rep.lower.size(); ++i)
    os << i + 1 << ',' << rep.lower[i] << ',' << rep.upper[i] << ',' << rep.target << ','
       << rep.horseshoe_sizes[i] << ',' << rep.branch_counts[i] << '\n';
}

void write_csv(std::ostream& os, const AppendixReport& rep) {
  os << "k,block,kind,horseshoe,lower,upper\n";
  for (const auto& lv : rep.levels)
    for (const auto& b : lv.blocks)
      os << lv.k << ',' << b.block << ',' << b.kind << ',' << b.cert.N << ',' << b.lower << ','
         << b.upper << '\n';
}

}  // namespace plent
