#pragma once

#include <cstddef>
#include <vector>

#include "plent/rat.hpp"

namespace plent {

constexpr std::size_t kDefaultBreakpointCap = 1000000;

struct Point {
  Rat x, y;
  bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

// Continuous piecewise-linear map, linear between consecutive breakpoints.
// Always held in canonical form (collinear interior breakpoints removed).
class PLMap {
 public:
  PLMap() = default;
  explicit PLMap(std::vector<Point> bp);

  const std::vector<Point>& breakpoints() const { return bp_; }
  std::size_t pieces() const { return bp_.size() - 1; }
  const Rat& lo() const { return bp_.front().x; }
  const Rat& hi() const { return bp_.back().x; }
  Interval domain() const { return {lo(), hi()}; }
  Interval image() const;
  Rat slope(std::size_t piece) const;
  // -1, 0 or +1 for the given piece.
  int sign(std::size_t piece) const;
  bool empty() const { return bp_.empty(); }

  Rat operator()(const Rat& x) const;

  bool operator==(const PLMap& o) const { return bp_ == o.bp_; }
  bool operator<(const PLMap& o) const;

 private:
  std::vector<Point> bp_;
};

PLMap identity_map(const Interval& dom = {0, 1});
PLMap linear_map(const Point& a, const Point& b);

Rat eval(const PLMap& f, const Rat& x);

// f o g.
PLMap compose(const PLMap& f, const PLMap& g, std::size_t cap = kDefaultBreakpointCap);
PLMap iterate(const PLMap& f, int k, std::size_t cap = kDefaultBreakpointCap);

// Interior points where monotonicity type changes; a plateau contributes both ends.
std::vector<Rat> critical_points(const PLMap& f);
// Maximal monotone pieces (a plateau is its own lap).
std::vector<Interval> laps(const PLMap& f);
std::size_t lap_count(const PLMap& f);
bool map_equals(const PLMap& f, const PLMap& g);
bool is_open_onto(const PLMap& f);

PLMap restrict_to(const PLMap& f, const Interval& dom);
// Inverse of a strictly monotone map.
PLMap inverse(const PLMap& h);
bool is_homeomorphism(const PLMap& h, const Interval& onto = {0, 1});
// h^-1 o f o h
PLMap conjugate(const PLMap& h, const PLMap& f);
// Concatenate maps on abutting domains into one map.
PLMap glue(const std::vector<PLMap>& parts);
// All x with f(x) = y: isolated points plus plateau intervals.
std::vector<Interval> preimage(const PLMap& f, const Rat& y);

struct LapGrowth {
  std::vector<std::size_t> laps;  // lap_count(f^n), n = 1..
  std::vector<double> terms;      // (1/n) log(laps - 1)
  bool constant_slope = false;    // fast path fired
  Rat slope;                      // s when constant_slope
  double exact = 0.0;             // log s when constant_slope
};

struct LapGrowthExhausted : ResourceError {
  LapGrowth partial;
  LapGrowthExhausted(const std::string& msg, LapGrowth p)
      : ResourceError(msg), partial(std::move(p)) {}
};

// Detects |slope| = s >= 1 on every piece, or on an invariant left core with a
// single increasing lap to its right. Returns false otherwise.
bool constant_slope_entropy(const PLMap& f, Rat& s);

LapGrowth entropy_lap_growth(const PLMap& f, int n_max,
                             std::size_t cap = kDefaultBreakpointCap);

}  // namespace plent
