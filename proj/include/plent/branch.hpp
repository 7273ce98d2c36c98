#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "plent/relation.hpp"

namespace plent {

constexpr std::size_t kDefaultArcCap = 5000000;

struct BranchFamily {
  int level = 1;
  std::vector<Arc> arcs;                       // monotone arcs only
  std::vector<std::pair<int, int>> provenance;  // (A in M_1, B in M_k); (-1,-1) at level 1
  std::size_t skipped = 0;                      // segment pieces left out of M_1
};

BranchFamily initial_branches(const PLMap& f, const PLMap& g);
BranchFamily initial_branches(const PLRelation& r);
// C_k(A,B) for one pair; `ok` false when the interiors do not meet.
struct ChainArc {
  bool ok = false;
  Arc arc;
};
ChainArc chain_arc(const Arc& a, const Arc& b);
BranchFamily next_family(const BranchFamily& m1, const BranchFamily& mk,
                         std::size_t cap = kDefaultArcCap);

struct BranchRow {
  int k = 0;
  std::size_t count = 0;
  double log_growth = 0;   // (1/k) log |M_k|
  double lower_bound = 0;  // log n - log 2 / k
  double upper_bound = 0;  // log n + log(k+1) / k
  bool within_bound = true;  // |M_k| <= (k+1) n^k
};

struct BranchCounts {
  int n = 0;  // lap bound used in the (k+1) n^k check
  std::vector<BranchRow> rows;
  bool complete = true;  // false when the arc cap stopped the recursion
};

BranchCounts branch_counts(const PLMap& f, const PLMap& g, int k_max,
                           std::size_t cap = kDefaultArcCap);
BranchCounts branch_counts(const PLRelation& r, int n, int k_max,
                           std::size_t cap = kDefaultArcCap);

// Critical points of f (m laps) interleave those of g (n laps), n > m.
bool interleave_check(const PLMap& f, const PLMap& g);

struct InfiniteFiber : DomainError {
  using DomainError::DomainError;
};
std::size_t fiber_cardinality(const BranchFamily& mk, const Rat& z);

}  // namespace plent
