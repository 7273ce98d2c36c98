#pragma once

// Brute-force references shared by the property suite and the acceptance binary.

#include <algorithm>
#include <random>

#include "plent/relation.hpp"

namespace oracle {

using namespace plent;

inline std::mt19937& rng() {
  static std::mt19937 gen(20240611);
  return gen;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// Random PL map onto a subset of [0,1] with no flat pieces.
inline PLMap random_map(int pieces, int den) {
  std::vector<int> xs{0, den};
  while (static_cast<int>(xs.size()) < pieces + 1) {
    int x = uniform(1, den - 1);
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Point> bp;
  int prev = -1;
  for (int x : xs) {
    int y;
    do y = uniform(0, den); while (y == prev);
    prev = y;
    bp.push_back({rat(x, den), rat(y, den)});
  }
  return PLMap(std::move(bp));
}

inline std::vector<Rat> sample_points(const std::vector<Rat>& extra, int count) {
  std::vector<Rat> pts = extra;
  for (int i = 0; i < count; ++i) {
    int d = uniform(1, 97);
    pts.push_back(rat(uniform(0, d), d));
  }
  return pts;
}

// [min, max] of a continuous PL map over a closed interval, from breakpoints.
inline Interval brute_image(const PLMap& g, const Interval& iv) {
  Rat lo = g(iv.lo), hi = lo;
  auto bump = [&](const Rat& x) {
    Rat y = g(x);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  };
  bump(iv.hi);
  for (const auto& p : g.breakpoints())
    if (iv.contains(p.x)) bump(p.x);
  return {lo, hi};
}

// All y with g(y) = z, as closed intervals, straight from the pieces.
inline IntervalSet brute_preimage(const PLMap& g, const Rat& z) {
  IntervalSet out;
  const auto& b = g.breakpoints();
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const auto &p = b[i], &q = b[i + 1];
    if (p.y == q.y) {
      if (p.y == z) out.push_back({p.x, q.x});
      continue;
    }
    if ((z - p.y) * (z - q.y) > 0) continue;
    Rat x = p.x + (z - p.y) * (q.x - p.x) / (q.y - p.y);
    out.push_back({x, x});
  }
  return merge_intervals(out);
}

// Directions (+1/-1) in which f leaves the value f(x), one per side of x.
inline std::vector<int> local_dirs(const PLMap& f, const Rat& x) {
  std::vector<int> d;
  const auto& b = f.breakpoints();
  Rat y = f(x);
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (it->x < x) {
      d.push_back(sgn(Rat(f(it->x) - y)));
      break;
    }
  for (const auto& p : b)
    if (p.x > x) {
      d.push_back(sgn(Rat(f(p.x) - y)));
      break;
    }
  return d;
}

// (x, y) with f(x) = g(y) lies on a nondegenerate arc of g^-1 o f iff some side of x and
// some side of y push the common value the same way; otherwise it is an isolated point,
// which composition drops on purpose.
inline bool moves_together(const PLMap& f, const Rat& x, const PLMap& g, const Rat& y) {
  for (int a : local_dirs(f, x))
    for (int b : local_dirs(g, y))
      if (a == b) return true;
  return false;
}

inline IntervalSet normalize(IntervalSet s) { return merge_intervals(std::move(s)); }

inline std::vector<Rat> breakpoint_xs(const PLMap& f) {
  std::vector<Rat> v;
  for (const auto& p : f.breakpoints()) v.push_back(p.x);
  return v;
}

}  // namespace oracle
