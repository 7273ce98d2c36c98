#include <doctest.h>

#include <cmath>

#include "plent/entropy.hpp"
#include "plent/families.hpp"

using namespace plent;

namespace {

DistanceFn line(const std::vector<double>& xs) {
  return [xs](std::size_t i, std::size_t j) { return std::abs(xs[i] - xs[j]); };
}

}  // namespace

TEST_CASE("separated and spanning counts on a line") {
  std::vector<double> xs{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  auto s = separated_count(xs.size(), line(xs), 0.25);
  CHECK(s.exact);
  CHECK(s.count == 4);
  auto r = spanning_count(xs.size(), line(xs), 0.25);
  CHECK(r.exact);
  CHECK(r.count == 3);
  auto g = separated_count(xs.size(), line(xs), 0.25, 0);
  CHECK_FALSE(g.exact);
  CHECK(g.count <= s.count);
  auto gr = spanning_count(xs.size(), line(xs), 0.25, 0);
  CHECK(gr.count >= r.count);
}

TEST_CASE("orbits are exact members of the fibers") {
  PLRelation r = compose_rel(inverse_rel(graph_of(tent(2))), graph_of(tent(2)));
  auto os = enumerate_orbits(r, 3, rat(1, 4));
  CHECK(os.orbits.size() > 5);
  for (const auto& o : os.orbits) CHECK(orbit_valid(r, o));
  CHECK_FALSE(orbit_valid(r, {rat(1, 4), rat(1, 2)}));
  CHECK_THROWS_AS(enumerate_orbits(r, 12, rat(1, 16), 1000), ResourceError);
}

TEST_CASE("estimate table for the tent") {
  auto t = entropy_estimate(graph_of(tent(2)), {1.0 / 8, 1.0 / 16}, 5, rat(1, 256));
  CHECK(t.monotone_in_eps);
  CHECK(t.rows.size() == 10);
  for (const auto& row : t.rows) {
    if (row.r_count >= 0) CHECK(static_cast<std::size_t>(row.r_count) <= row.s_count);
  }
}

TEST_CASE("two-horseshoe of the tent preimage relation") {
  PLRelation r = compose_rel(inverse_rel(graph_of(tent(2))), graph_of(tent(2)));
  auto cert = find_horseshoe(r, 2);
  REQUIRE(cert);
  REQUIRE(cert->intervals.size() == 2);
  CHECK(cert->intervals[0] == Interval{0, rat(1, 3)});
  CHECK(cert->intervals[1] == Interval{rat(2, 3), 1});
  CHECK(verify_horseshoe(r, cert->intervals));
  CHECK(cert->relation_id == relation_id(r));
  CHECK_FALSE(verify_horseshoe(r, {{0, rat(1, 2)}, {rat(1, 2), 1}}));
}

TEST_CASE("odd laps give the horseshoes of the parametrized graph") {
  PLRelation gamma = param_graph(tent(2), tent(3));
  auto c1 = find_horseshoe(gamma, 2, laps(tent(3)));
  REQUIRE(c1);
  CHECK(verify_horseshoe(gamma, c1->intervals));
  PLRelation g3 = param_graph(iterate(tent(2), 3), iterate(tent(3), 3));
  auto c3 = find_horseshoe(g3, 14, laps(iterate(tent(3), 3)));
  REQUIRE(c3);
  CHECK(c3->N == 14);
  CHECK(verify_horseshoe(g3, c3->intervals));
  CHECK_FALSE(find_horseshoe(gamma, 4));
}

TEST_CASE("parametrized powers match composed powers") {
  PLRelation gamma = param_graph(tent(2), tent(3));
  PLRelation g2 = compose_rel(gamma, gamma);
  CHECK(rel_equals(g2, param_graph(iterate(tent(2), 2), iterate(tent(3), 2))));
  auto a = iterate_horseshoe_bound(gamma, 2);
  auto b = param_horseshoe_bound(tent(2), tent(3), 2);
  CHECK(a.sizes == b.sizes);
  CHECK(b.sizes == std::vector<std::size_t>{2, 5});
}

TEST_CASE("tent graph iterates approach log 2") {
  auto b = iterate_horseshoe_bound(graph_of(tent(2)), 4);
  CHECK(b.best <= std::log(2.0));
  CHECK(b.best >= std::log(8.0) / 4);
}

TEST_CASE("bracket on a small case") {
  auto rep = bracket_theorem_main(3, 2, 4);
  CHECK(rep.ok());
  REQUIRE(rep.lower.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.lower[i] <= rep.target);
    CHECK(rep.target <= rep.upper[i]);
  }
  CHECK(rep.horseshoe_sizes == std::vector<std::size_t>{2, 5, 14, 41});
  CHECK_THROWS_AS(bracket_theorem_main(4, 2, 2), PreconditionError);
}
