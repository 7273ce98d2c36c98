#include <doctest.h>

#include <cmath>

#include "plent/families.hpp"
#include "plent/invlim.hpp"

using namespace plent;

TEST_CASE("compatibility of diagonal systems") {
  CHECK(check_diagonal_compat(constant_system(tent(2), tent(2)), 5).ok);
  CHECK(check_diagonal_compat(constant_system(tent(2), tent(3)), 5).ok);
  CHECK(check_diagonal_compat(shift_system(tent(2)), 5).ok);
  CHECK(check_diagonal_compat(appendix_system({2, 5, 2, 5}, 2), 4).ok);
  auto bad = check_diagonal_compat(constant_system(tent(2), plateau_R()), 3);
  CHECK_FALSE(bad.ok);
  CHECK(bad.level == 1);
}

TEST_CASE("psi components") {
  CHECK(rel_equals(psi_component(constant_system(tent(2), tent(3)), 0), param_graph(tent(2), tent(3))));
  CHECK(rel_equals(psi_component(shift_system(tent(2)), 3), graph_of(tent(2))));
  CHECK(rel_equals(psi_component(constant_system(tent(2), tent(2)), 0), diagonal()));
}

TEST_CASE("points and the diagonal step") {
  auto sys = shift_system(tent(2));
  auto p = pull_back_point(sys, 4, rat(1, 3));
  CHECK(is_consistent(sys, p));
  auto q = apply_diagonal(sys, p);
  CHECK(q.depth() == 3);
  CHECK(q.coords[0] == tent(2)(p.coords[0]));
  for (int i = 1; i <= 3; ++i) CHECK(q.coords[i] == p.coords[i - 1]);
  auto top = make_point(sys, 3, rat(1, 5));
  CHECK(is_consistent(sys, top));
  CHECK(top.coords[3] == rat(1, 5));
  auto c = constant_system(tent(2), tent(3));
  TruncatedPoint fixed{std::vector<Rat>(4, rat(2, 3))};
  CHECK(is_consistent(c, fixed));
  TruncatedPoint broken{{rat(1, 2), rat(1, 2)}};
  CHECK_FALSE(is_consistent(c, broken));
  TruncatedPoint zero{std::vector<Rat>(4, Rat(0))};
  CHECK(apply_diagonal(c, zero).coords == std::vector<Rat>(3, Rat(0)));
  TruncatedPoint one{{rat(1, 2), rat(1, 4)}};
  CHECK(apply_diagonal(c, one).coords == std::vector<Rat>{rat(3, 4)});
  TruncatedPoint flat{{rat(1, 2)}};
  CHECK_THROWS_AS(apply_diagonal(c, flat), DepthError);
}

TEST_CASE("truncated metric") {
  TruncatedPoint a{{0, 0, 0}}, b{{rat(1, 4), 0, 0}}, d{{0, 0, 1}};
  CHECK(truncated_metric(a, a).value == 0);
  CHECK(truncated_metric(a, b).value == rat(1, 4));
  CHECK(truncated_metric(a, d).value == rat(1, 4));
  CHECK(truncated_metric(a, b).tail == rat(1, 4));
  TruncatedPoint deep{std::vector<Rat>(9, Rat(0))};
  CHECK(truncated_metric(deep, deep).tail == rat(1, 256));
  CHECK_THROWS_AS(truncated_metric(a, deep), DomainError);
}

TEST_CASE("orbit lifting") {
  auto c = constant_system(tent(2), tent(3));
  CHECK(lift_condition(c, 1));
  auto os = enumerate_orbits(psi_component(c, 1), 3, rat(1, 8));
  for (std::size_t idx = 0; idx < os.orbits.size(); idx += 7) {
    const auto& orb = os.orbits[idx];
    auto xi = lift_orbit(c, 1, orb, 5);
    CHECK(is_consistent(c, xi));
    auto it = xi;
    for (std::size_t k = 0; k < orb.size(); ++k) {
      if (k) it = apply_diagonal(c, it);
      CHECK(it.coords[1] == orb[k]);
    }
  }
  auto sh = shift_system(tent(2));
  auto xi = lift_orbit(sh, 0, {rat(1, 3), rat(2, 3)}, 3);
  CHECK(xi.coords[0] == rat(1, 3));
  CHECK(xi.coords[1] == rat(1, 6));
  CHECK(apply_diagonal(sh, xi).coords[0] == rat(2, 3));
  CHECK_THROWS_AS(lift_orbit(sh, 0, {rat(1, 3), rat(1, 3)}, 3), DomainError);
}

TEST_CASE("lifting fails on the appendix system") {
  auto ap = appendix_system({2, 5, 2, 5}, 2);
  CHECK_FALSE(lift_condition(ap, 2));
  auto os = enumerate_orbits(psi_component(ap, 1), 3, rat(1, 8));
  REQUIRE(!os.orbits.empty());
  bool raised = false;
  try {
    lift_orbit(ap, 1, os.orbits.front(), 4);
  } catch (const LiftError& e) {
    raised = true;
    CHECK(e.level == 2);
  }
  CHECK(raised);
}

TEST_CASE("diagonal estimates carry the tail bound") {
  DiagonalEstimateOptions opt;
  opt.psi_levels = {0};
  opt.psi_n_max = 2;
  auto rows = entropy_estimate_diagonal(shift_system(tent(2)), 4, 4, 1.0 / 16, rat(1, 32), opt);
  int psi_rows = 0;
  for (const auto& r : rows) {
    if (r.level == -1)
      CHECK(r.tail_bound == 1.0 / 16);
    else
      ++psi_rows;
    CHECK(r.estimate >= 0);
  }
  CHECK(psi_rows == 2);
}

TEST_CASE("separated families keep their size under deep projection") {
  auto sys = shift_system(tent(2));
  std::vector<TruncatedPoint> pts;
  for (int a = 0; a <= 16; ++a) pts.push_back(make_point(sys, 6, rat(a, 16)));
  // all pairs differ at the deepest coordinate by at least 1/16
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      CHECK(truncated_metric(pts[i], pts[j]).value >= rat(1, 16) / 64);
  CHECK(projection_cardinality(pts, 6) == pts.size());
  CHECK(projection_cardinality(pts, 0) < pts.size());
  CHECK_THROWS_AS(projection_cardinality(pts, 7), DepthError);
}

TEST_CASE("appendix report per level") {
  auto rep = appendix_report({2, 5, 2, 5}, 2, 2, 4, 4);
  REQUIRE(rep.levels.size() == 2);
  CHECK(rep.levels[0].compatible);
  CHECK(rep.levels[1].blocks[2].cert.N == 5);
  CHECK(rep.lift_error_level == 2);
}
