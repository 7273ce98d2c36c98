#include <doctest.h>

#include "plent/branch.hpp"
#include "plent/families.hpp"

using namespace plent;

TEST_CASE("M_1 and M_2 for (3,2)") {
  auto m1 = initial_branches(tent(2), tent(3));
  CHECK(m1.arcs.size() == 4);
  auto m2 = next_family(m1, m1);
  CHECK(m2.arcs.size() == 14);
  CHECK(m2.level == 2);
  CHECK(m2.provenance.size() == 14);
}

TEST_CASE("chain arcs of the worked example") {
  auto m1 = initial_branches(tent(2), tent(3));
  const auto &A = m1.arcs[0], &B = m1.arcs[1], &C = m1.arcs[2];
  auto ab = chain_arc(A, B);
  REQUIRE(ab.ok);
  CHECK(ab.arc.dom() == Interval{rat(4, 9), rat(2, 3)});
  CHECK(ab.arc.ran() == Interval{rat(1, 2), 1});
  auto ca = chain_arc(C, A);
  REQUIRE(ca.ok);
  CHECK(ca.arc.dom() == Interval{rat(2, 3), 1});
  CHECK(ca.arc.ran() == Interval{0, rat(3, 4)});
  CHECK_FALSE(chain_arc(C, C).ok);
  CHECK_FALSE(chain_arc(C, B).ok);
}

TEST_CASE("branch counts stay within (k+1) n^k") {
  auto bc = branch_counts(tent(2), tent(3), 8);
  REQUIRE(bc.rows.size() == 8);
  std::vector<std::size_t> want{4, 14, 46, 146, 454, 1394, 4246, 12866};
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(bc.rows[i].count == want[i]);
    CHECK(bc.rows[i].within_bound);
  }
  CHECK(bc.rows.back().log_growth <= bc.rows.back().upper_bound);
}

TEST_CASE("arc cap stops the recursion") {
  auto bc = branch_counts(tent(2), tent(3), 6, 100);
  CHECK_FALSE(bc.complete);
  CHECK(bc.rows.size() < 6);
}

TEST_CASE("initial branches need open maps") {
  CHECK_THROWS_AS(initial_branches(plateau_R(), tent(2)), DomainError);
}

TEST_CASE("critical points interleave for coprime tents") {
  CHECK(interleave_check(tent(2), tent(3)));
  CHECK(interleave_check(tent(3), tent(5)));
  CHECK_FALSE(interleave_check(tent(2), tent(4)));
  CHECK_THROWS_AS(interleave_check(tent(3), tent(2)), DomainError);
}

TEST_CASE("fiber cardinality") {
  auto m1 = initial_branches(tent(2), tent(3));
  CHECK(fiber_cardinality(m1, rat(2, 3)) == 2);
  CHECK(fiber_cardinality(m1, 0) == 2);
  BranchFamily v;
  v.arcs.push_back(Arc::vertical(rat(1, 2), {0, 1}));
  CHECK_THROWS_AS(fiber_cardinality(v, rat(1, 2)), InfiniteFiber);
}
