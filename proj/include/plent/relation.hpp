#pragma once

#include <vector>

#include "plent/plmap.hpp"

namespace plent {

enum class ArcKind { Mono, Horizontal, Vertical };

// Mono: graph of the homeomorphism h from dom onto ran.
// Horizontal: span is the x-range, level the y-value.
// Vertical: span is the y-range, level the x-value.
struct Arc {
  ArcKind kind = ArcKind::Mono;
  PLMap h;
  Interval span;
  Rat level;

  static Arc mono(PLMap h);
  static Arc horizontal(const Interval& xs, const Rat& y);
  static Arc vertical(const Rat& x, const Interval& ys);

  Interval dom() const;
  Interval ran() const;
  // +1 increasing, -1 decreasing, 0 for segments.
  int direction() const;
  bool operator==(const Arc& o) const;
  bool operator<(const Arc& o) const;
};

struct Segment {
  Point a, b;  // a before b in (x, y) order
  bool operator==(const Segment& o) const { return a == o.a && b == o.b; }
  bool operator<(const Segment& o) const;
};

class PLRelation {
 public:
  PLRelation() = default;
  explicit PLRelation(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {}
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t size() const { return arcs_.size(); }

 private:
  std::vector<Arc> arcs_;
};

// Fiber or image as sorted disjoint closed intervals (points are degenerate).
using IntervalSet = std::vector<Interval>;

PLRelation graph_of(const PLMap& f);
PLRelation diagonal();
PLRelation inverse_rel(const PLRelation& r);
PLRelation rel_union(const PLRelation& a, const PLRelation& b);

struct ComposeStats {
  std::size_t dropped_points = 0;  // single-point overlaps discarded
};
// s o r = {(x,z) : (x,y) in r, (y,z) in s}; canonical output.
PLRelation compose_rel(const PLRelation& s, const PLRelation& r, ComposeStats* stats = nullptr);

IntervalSet evaluate_at(const PLRelation& r, const Rat& x);
IntervalSet image_of(const PLRelation& r, const Interval& a);
bool set_contains(const IntervalSet& s, const Interval& a);

// Maximal collinear segments covering the point set, sorted.
std::vector<Segment> canonical_segments(const PLRelation& r);
// Rebuild maximal monotone arcs from the canonical segments.
PLRelation canonicalize(const PLRelation& r);
bool rel_equals(const PLRelation& a, const PLRelation& b);

// {(f(t), g(t))}, split at the merged critical points of f and g.
PLRelation param_graph(const PLMap& f, const PLMap& g);

struct CommuteReport {
  bool equal = false;
  bool region = false;  // f^-1 o g contains a two-dimensional piece
  PLRelation left;      // g o f^-1
  PLRelation right;     // f^-1 o g (empty when region)
};
CommuteReport strong_commute_report(const PLMap& f, const PLMap& g);
bool strongly_commutes(const PLMap& f, const PLMap& g);
bool commutes(const PLMap& f, const PLMap& g);

// Arcs clipped to x in the block (single-point overlaps dropped).
PLRelation restrict_rel(const PLRelation& r, const Interval& block);

}  // namespace plent
