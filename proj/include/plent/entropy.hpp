#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plent/branch.hpp"

namespace plent {

constexpr std::size_t kDefaultOrbitCap = 2000000;

// Worker count from PLENT_THREADS (default 1).
int worker_threads();

struct OrbitSet {
  int n = 0;
  std::vector<std::vector<Rat>> orbits;
  Rat grid;
};

// Start on the grid; successors are fiber endpoints plus grid points inside
// interval fibers, so every step is an exact member of the fiber.
OrbitSet enumerate_orbits(const PLRelation& r, int n, const Rat& grid,
                          std::size_t cap = kDefaultOrbitCap);
bool orbit_valid(const PLRelation& r, const std::vector<Rat>& orbit);

struct CountResult {
  std::size_t count = 0;
  bool exact = false;
};

using DistanceFn = std::function<double(std::size_t, std::size_t)>;

// Largest subset with pairwise distance > eps.
CountResult separated_count(std::size_t n_items, const DistanceFn& d, double eps,
                            std::size_t exact_limit = 64);
// Smallest subset with every item within eps of a member.
CountResult spanning_count(std::size_t n_items, const DistanceFn& d, double eps,
                           std::size_t exact_limit = 20);

CountResult separated_count(const OrbitSet& o, double eps, std::size_t exact_limit = 64);
CountResult spanning_count(const OrbitSet& o, double eps, std::size_t exact_limit = 20);

struct EstimateRow {
  int n = 0;
  double eps = 0;
  Rat grid;
  std::size_t s_count = 0;
  long long r_count = -1;  // -1 when skipped
  double estimate = 0;
};

struct EstimateTable {
  std::vector<EstimateRow> rows;
  bool monotone_in_eps = true;  // s grows as eps shrinks, per n
};

EstimateTable entropy_estimate(const PLRelation& r, const std::vector<double>& eps_schedule,
                               int n_max, const Rat& grid,
                               std::size_t cap = kDefaultOrbitCap,
                               std::size_t span_limit = 2000);

struct HorseshoeCert {
  std::vector<Interval> intervals;
  std::size_t N = 0;
  std::string relation_id;
};

std::string relation_id(const PLRelation& r);
// Pairwise disjoint and every interval inside every image, exactly.
bool verify_horseshoe(const PLRelation& r, const std::vector<Interval>& intervals);
std::optional<HorseshoeCert> find_horseshoe(const PLRelation& r, std::size_t N,
                                            const std::vector<Interval>& hints = {});
// Largest family found by the same search (N may be 0).
HorseshoeCert largest_horseshoe(const PLRelation& r, const std::vector<Interval>& hints = {});

struct IterateBound {
  std::vector<std::size_t> sizes;  // N_k for k = 1..
  std::vector<double> running;    // max_{j<=k} (1/j) log N_j
  double best = 0;
  std::vector<HorseshoeCert> certs;
};

// Powers of r by composition.
IterateBound iterate_horseshoe_bound(const PLRelation& r, int k_max);
// Powers of param_graph(f, g) as param_graph(f^k, g^k), both orientations.
IterateBound param_horseshoe_bound(const PLMap& f, const PLMap& g, int k_max,
                                   bool keep_certs = true);

struct BracketReport {
  int n = 0, m = 0, k_max = 0;
  double target = 0;
  std::vector<double> lower, upper;
  std::vector<std::size_t> horseshoe_sizes, branch_counts;
  std::vector<HorseshoeCert> certs;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

BracketReport bracket_theorem_main(int n, int m, int k_max, bool keep_certs = true);

}  // namespace plent
