#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "plent/entropy.hpp"

namespace plent {

// (x_0, ..., x_depth) with f_i(x_i) = x_{i-1}.
struct TruncatedPoint {
  std::vector<Rat> coords;
  int depth() const { return static_cast<int>(coords.size()) - 1; }
  bool operator==(const TruncatedPoint& o) const { return coords == o.coords; }
};

struct DepthError : DomainError {
  using DomainError::DomainError;
};

struct LiftError : DomainError {
  LiftError(int lvl, const std::string& what) : DomainError(what), level(lvl) {}
  int level;
};

// Bonding maps f_i : X_i -> X_{i-1} and diagonal maps g_i : X_i -> X_{i-1}, i >= 1.
class DiagonalSystem {
 public:
  using Generator = std::function<PLMap(int)>;
  DiagonalSystem(Generator f, Generator g, std::string name, int depth_budget = 64);

  const PLMap& f(int i) const;
  const PLMap& g(int i) const;
  const std::string& name() const { return name_; }
  int depth_budget() const { return budget_; }

 private:
  const PLMap& fetch(const Generator& gen, std::map<int, PLMap>& cache, int i) const;
  Generator fgen_, ggen_;
  std::string name_;
  int budget_;
  mutable std::map<int, PLMap> fcache_, gcache_;
};

DiagonalSystem constant_system(const PLMap& f, const PLMap& g);
// f_i = f, g_i = f o f: the diagonal map is the natural extension of f.
DiagonalSystem shift_system(const PLMap& f);
// Levels beyond n_seq reuse it periodically.
DiagonalSystem appendix_system(const std::vector<int>& n_seq, const Rat& s);

struct CompatResult {
  bool ok = true;
  int level = -1;  // first i with g_i o f_{i+1} != f_i o g_{i+1}
  explicit operator bool() const { return ok; }
};
CompatResult check_diagonal_compat(const DiagonalSystem& sys, int depth);

// g_{i+1} o f_{i+1}^-1 as the parametrized graph of (f_{i+1}, g_{i+1}).
PLRelation psi_component(const DiagonalSystem& sys, int i);

// Push x_depth forward through the bonding maps.
TruncatedPoint make_point(const DiagonalSystem& sys, int depth, const Rat& x_depth);
// x_0 given, deeper coordinates by smallest preimage.
TruncatedPoint pull_back_point(const DiagonalSystem& sys, int depth, const Rat& x0);
bool is_consistent(const DiagonalSystem& sys, const TruncatedPoint& p);
TruncatedPoint apply_diagonal(const DiagonalSystem& sys, const TruncatedPoint& p);

struct MetricValue {
  Rat value;  // sum over available coordinates of |x_i - y_i| / 2^i
  Rat tail;   // 2^-depth
};
MetricValue truncated_metric(const TruncatedPoint& p, const TruncatedPoint& q);

// Condition g_{i+1} o f_{i+1}^-1 = f_i^-1 o g_i at level i.
bool lift_condition(const DiagonalSystem& sys, int i);
TruncatedPoint lift_orbit(const DiagonalSystem& sys, int level, const std::vector<Rat>& orbit,
                          int depth);

struct DiagonalRow {
  int level = -1;  // -1 for the diagonal map itself, else the psi level
  int n = 0;
  double eps = 0;
  std::size_t count = 0;
  double estimate = 0;
  double tail_bound = 0;
};

struct DiagonalEstimateOptions {
  std::vector<int> psi_levels;
  int psi_n_max = 4;
  Rat psi_grid = Rat(1, 64);
  std::size_t cap = kDefaultOrbitCap;
  // grid on x_depth pushed forward instead of grid on x_0 pulled back
  bool seed_top = false;
};

std::vector<DiagonalRow> entropy_estimate_diagonal(const DiagonalSystem& sys, int depth, int n_max,
                                                   double eps, const Rat& grid,
                                                   const DiagonalEstimateOptions& opt = {});

struct AppendixBlock {
  int block = 0;
  std::string kind;
  std::size_t arcs = 0;
  HorseshoeCert cert;  // largest family found on the block relation
  double lower = 0;    // log N, or the iterate bound on the first block
  std::vector<std::size_t> branch;  // |M_k| for k = 1..k_b
  double upper = 0;                 // (1/k_b) log |M_k_b|
};

struct AppendixLevel {
  int k = 0;
  int n_k = 0;
  bool compatible = false;  // f_k o g_{k+1} = g_k o f_{k+1}
  double target = 0;        // max(log s, log n_k)
  int k_b = 0;
  std::vector<AppendixBlock> blocks;
  double lower = 0, upper = 0;  // max over blocks
  double first_block_lower = 0;
};

struct AppendixReport {
  Rat s;
  std::vector<int> n_seq;
  std::vector<AppendixLevel> levels;
  int lift_error_level = -1;  // -1 when lifting did not fail
  std::string lift_message;
};

// psi_k = g_k o f_k^-1 per invariant dyadic block, k = 1..k_max.
AppendixReport appendix_report(const std::vector<int>& n_seq, const Rat& s, int k_max, int k_b,
                               int first_block_iterates = 6);

// Number of distinct values of coordinate i over the family.
std::size_t projection_cardinality(const std::vector<TruncatedPoint>& pts, int i);

}  // namespace plent
