#include "plent/relation.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace plent {

namespace {

bool point_less(const Point& p, const Point& q) {
  int c = cmp(p.x, q.x);
  return c < 0 || (c == 0 && p.y < q.y);
}

Interval hull(const Rat& a, const Rat& b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

Interval map_interval(const PLMap& h, const Interval& iv) { return hull(h(iv.lo), h(iv.hi)); }

}  // namespace

Arc Arc::mono(PLMap h) {
  int s = h.sign(0);
  for (std::size_t i = 0; i < h.pieces(); ++i)
    if (h.sign(i) == 0 || h.sign(i) != s) throw HomeoError("arc map must be strictly monotone");
  Arc a;
  a.kind = ArcKind::Mono;
  a.h = std::move(h);
  return a;
}

Arc Arc::horizontal(const Interval& xs, const Rat& y) {
  Arc a;
  a.kind = ArcKind::Horizontal;
  a.span = xs;
  a.level = y;
  return a;
}

Arc Arc::vertical(const Rat& x, const Interval& ys) {
  Arc a;
  a.kind = ArcKind::Vertical;
  a.span = ys;
  a.level = x;
  return a;
}

Interval Arc::dom() const {
  switch (kind) {
    case ArcKind::Mono: return h.domain();
    case ArcKind::Horizontal: return span;
    default: return {level, level};
  }
}

Interval Arc::ran() const {
  switch (kind) {
    case ArcKind::Mono: return h.image();
    case ArcKind::Horizontal: return {level, level};
    default: return span;
  }
}

int Arc::direction() const { return kind == ArcKind::Mono ? h.sign(0) : 0; }

bool Arc::operator==(const Arc& o) const {
  if (kind != o.kind) return false;
  if (kind == ArcKind::Mono) return h == o.h;
  return span == o.span && level == o.level;
}

bool Arc::operator<(const Arc& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (kind == ArcKind::Mono) return h < o.h;
  if (!(level == o.level)) return level < o.level;
  return span < o.span;
}

bool Segment::operator<(const Segment& o) const {
  if (!(a == o.a)) return point_less(a, o.a);
  return point_less(b, o.b);
}

PLRelation graph_of(const PLMap& f) {
  std::vector<Arc> arcs;
  for (const auto& lap : laps(f)) {
    PLMap piece = restrict_to(f, lap);
    if (piece.sign(0) == 0)
      arcs.push_back(Arc::horizontal(lap, f(lap.lo)));
    else
      arcs.push_back(Arc::mono(std::move(piece)));
  }
  return PLRelation(std::move(arcs));
}

PLRelation diagonal() { return PLRelation({Arc::mono(identity_map())}); }

PLRelation inverse_rel(const PLRelation& r) {
  std::vector<Arc> arcs;
  arcs.reserve(r.size());
  for (const auto& a : r.arcs()) {
    switch (a.kind) {
      case ArcKind::Mono: arcs.push_back(Arc::mono(inverse(a.h))); break;
      case ArcKind::Horizontal: arcs.push_back(Arc::vertical(a.level, a.span)); break;
      case ArcKind::Vertical: arcs.push_back(Arc::horizontal(a.span, a.level)); break;
    }
  }
  return PLRelation(std::move(arcs));
}

PLRelation rel_union(const PLRelation& a, const PLRelation& b) {
  std::vector<Arc> arcs = a.arcs();
  arcs.insert(arcs.end(), b.arcs().begin(), b.arcs().end());
  return canonicalize(PLRelation(std::move(arcs)));
}

namespace {

// One arc of r followed by one arc of s.
void compose_pair(const Arc& r, const Arc& s, std::vector<Arc>& out, ComposeStats* st) {
  auto drop = [&] {
    if (st) ++st->dropped_points;
  };
  Interval rr = r.ran(), sd = s.dom();
  auto ov = intersect(rr, sd);
  if (!ov.ok) return;
  const Interval& z = ov.iv;

  if (r.kind == ArcKind::Horizontal) {
    // z is the single value r.level
    if (s.kind == ArcKind::Mono)
      out.push_back(Arc::horizontal(r.span, s.h(r.level)));
    else if (s.kind == ArcKind::Horizontal)
      out.push_back(Arc::horizontal(r.span, s.level));
    else
      throw RegionError("composition contains a two-dimensional piece at y=" +
                        to_string(r.level));
    return;
  }
  if (r.kind == ArcKind::Vertical) {
    if (s.kind == ArcKind::Vertical) {
      out.push_back(Arc::vertical(r.level, s.span));
    } else if (z.degenerate()) {
      drop();
    } else if (s.kind == ArcKind::Mono) {
      out.push_back(Arc::vertical(r.level, map_interval(s.h, z)));
    } else {
      drop();
    }
    return;
  }
  // r monotone
  if (s.kind == ArcKind::Vertical) {
    out.push_back(Arc::vertical(inverse(r.h)(s.level), s.span));
    return;
  }
  if (z.degenerate()) {
    drop();
    return;
  }
  PLMap rinv = inverse(r.h);
  Interval x = map_interval(rinv, z);
  if (s.kind == ArcKind::Horizontal) {
    out.push_back(Arc::horizontal(x, s.level));
    return;
  }
  PLMap rpart = x == r.h.domain() ? r.h : restrict_to(r.h, x);
  PLMap spart = z == s.h.domain() ? s.h : restrict_to(s.h, z);
  out.push_back(Arc::mono(compose(spart, rpart)));
}

}  // namespace

PLRelation compose_rel(const PLRelation& s, const PLRelation& r, ComposeStats* stats) {
  std::vector<Arc> out;
  for (const auto& ra : r.arcs())
    for (const auto& sa : s.arcs()) compose_pair(ra, sa, out, stats);
  return canonicalize(PLRelation(std::move(out)));
}

IntervalSet evaluate_at(const PLRelation& r, const Rat& x) {
  IntervalSet out;
  for (const auto& a : r.arcs()) {
    switch (a.kind) {
      case ArcKind::Mono:
        if (a.h.domain().contains(x)) {
          Rat y = a.h(x);
          out.push_back({y, y});
        }
        break;
      case ArcKind::Horizontal:
        if (a.span.contains(x)) out.push_back({a.level, a.level});
        break;
      case ArcKind::Vertical:
        if (a.level == x) out.push_back(a.span);
        break;
    }
  }
  return merge_intervals(std::move(out));
}

IntervalSet image_of(const PLRelation& r, const Interval& in) {
  IntervalSet out;
  for (const auto& a : r.arcs()) {
    switch (a.kind) {
      case ArcKind::Mono: {
        auto ov = intersect(a.h.domain(), in);
        if (ov.ok) out.push_back(map_interval(a.h, ov.iv));
        break;
      }
      case ArcKind::Horizontal:
        if (intersect(a.span, in).ok) out.push_back({a.level, a.level});
        break;
      case ArcKind::Vertical:
        if (in.contains(a.level)) out.push_back(a.span);
        break;
    }
  }
  return merge_intervals(std::move(out));
}

bool set_contains(const IntervalSet& s, const Interval& a) {
  auto it = std::upper_bound(s.begin(), s.end(), a.lo,
                             [](const Rat& v, const Interval& iv) { return v < iv.lo; });
  if (it == s.begin()) return false;
  --it;
  return it->contains(a);
}

namespace {

struct LineKey {
  bool vertical;
  Rat slope, icept;  // y = slope x + icept, or x = icept
  bool operator<(const LineKey& o) const {
    return std::tie(vertical, slope, icept) < std::tie(o.vertical, o.slope, o.icept);
  }
};

void push_segment(std::vector<Segment>& segs, Point p, Point q) {
  if (p == q) return;
  if (point_less(q, p)) std::swap(p, q);
  segs.push_back({std::move(p), std::move(q)});
}

std::vector<Segment> raw_segments(const PLRelation& r) {
  std::vector<Segment> segs;
  for (const auto& a : r.arcs()) {
    switch (a.kind) {
      case ArcKind::Mono: {
        const auto& b = a.h.breakpoints();
        for (std::size_t i = 0; i + 1 < b.size(); ++i) push_segment(segs, b[i], b[i + 1]);
        break;
      }
      case ArcKind::Horizontal:
        push_segment(segs, {a.span.lo, a.level}, {a.span.hi, a.level});
        break;
      case ArcKind::Vertical:
        push_segment(segs, {a.level, a.span.lo}, {a.level, a.span.hi});
        break;
    }
  }
  return segs;
}

}  // namespace

std::vector<Segment> canonical_segments(const PLRelation& r) {
  std::map<LineKey, std::vector<Segment>> lines;
  for (auto& s : raw_segments(r)) {
    LineKey k;
    if (s.a.x == s.b.x) {
      k.vertical = true;
      k.icept = s.a.x;
    } else {
      k.vertical = false;
      k.slope = (s.b.y - s.a.y) / (s.b.x - s.a.x);
      k.icept = s.a.y - k.slope * s.a.x;
    }
    lines[k].push_back(std::move(s));
  }
  std::vector<Segment> out;
  for (auto& [k, segs] : lines) {
    std::sort(segs.begin(), segs.end());
    std::size_t first = out.size();
    for (auto& s : segs) {
      if (out.size() > first && !point_less(out.back().b, s.a)) {
        if (point_less(out.back().b, s.b)) out.back().b = s.b;
      } else {
        out.push_back(s);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PLRelation canonicalize(const PLRelation& r) {
  auto segs = canonical_segments(r);
  std::map<std::pair<Rat, Rat>, int> degree;
  auto key = [](const Point& p) { return std::make_pair(p.x, p.y); };
  for (const auto& s : segs) {
    ++degree[key(s.a)];
    ++degree[key(s.b)];
  }
  auto sign_of = [](const Segment& s) {
    if (s.a.x == s.b.x) return 2;  // vertical
    return s.b.y > s.a.y ? 1 : (s.b.y < s.a.y ? -1 : 0);
  };
  // Successor lookup for monotone chaining by left endpoint.
  std::map<std::pair<Rat, Rat>, std::size_t> by_left;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    int sg = sign_of(segs[i]);
    if (sg == 1 || sg == -1) by_left[key(segs[i].a)] = i;
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Arc> arcs;
  auto joins = [&](std::size_t i, const Point& at, std::size_t& next) {
    if (degree[key(at)] != 2) return false;
    auto it = by_left.find(key(at));
    if (it == by_left.end() || it->second == i) return false;
    next = it->second;
    return sign_of(segs[next]) == sign_of(segs[i]);
  };
  // A segment starts a chain unless it has a joining predecessor.
  std::vector<bool> has_pred(segs.size(), false);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    int sg = sign_of(segs[i]);
    if (sg != 1 && sg != -1) continue;
    std::size_t nx;
    if (joins(i, segs[i].b, nx)) has_pred[nx] = true;
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    int sg = sign_of(segs[i]);
    if (sg == 0) {
      arcs.push_back(Arc::horizontal({segs[i].a.x, segs[i].b.x}, segs[i].a.y));
      continue;
    }
    if (sg == 2) {
      arcs.push_back(Arc::vertical(segs[i].a.x, {segs[i].a.y, segs[i].b.y}));
      continue;
    }
    if (has_pred[i] || used[i]) continue;
    std::vector<Point> pts{segs[i].a, segs[i].b};
    used[i] = true;
    std::size_t cur = i, nx;
    while (joins(cur, segs[cur].b, nx) && !used[nx]) {
      used[nx] = true;
      pts.push_back(segs[nx].b);
      cur = nx;
    }
    arcs.push_back(Arc::mono(PLMap(std::move(pts))));
  }
  std::sort(arcs.begin(), arcs.end());
  return PLRelation(std::move(arcs));
}

bool rel_equals(const PLRelation& a, const PLRelation& b) {
  return canonical_segments(a) == canonical_segments(b);
}

PLRelation param_graph(const PLMap& f, const PLMap& g) {
  if (!(f.domain() == g.domain())) throw DomainError("param_graph needs a shared domain");
  std::vector<Rat> cuts{f.lo()};
  auto cf = critical_points(f), cg = critical_points(g);
  cuts.insert(cuts.end(), cf.begin(), cf.end());
  cuts.insert(cuts.end(), cg.begin(), cg.end());
  cuts.push_back(f.hi());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Rat> ts;
  for (const auto& p : f.breakpoints()) ts.push_back(p.x);
  for (const auto& p : g.breakpoints()) ts.push_back(p.x);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<Arc> arcs;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const Rat &t0 = cuts[c], &t1 = cuts[c + 1];
    Rat f0 = f(t0), f1 = f(t1), g0 = g(t0), g1 = g(t1);
    bool fc = f0 == f1, gc = g0 == g1;
    if (fc && gc) continue;
    if (fc) {
      arcs.push_back(Arc::vertical(f0, hull(g0, g1)));
      continue;
    }
    if (gc) {
      arcs.push_back(Arc::horizontal(hull(f0, f1), g0));
      continue;
    }
    std::vector<Point> pts;
    auto lo = std::lower_bound(ts.begin(), ts.end(), t0);
    auto hi = std::upper_bound(ts.begin(), ts.end(), t1);
    for (auto it = lo; it != hi; ++it) pts.push_back({f(*it), g(*it)});
    if (f1 < f0) std::reverse(pts.begin(), pts.end());
    arcs.push_back(Arc::mono(PLMap(std::move(pts))));
  }
  return PLRelation(std::move(arcs));
}

CommuteReport strong_commute_report(const PLMap& f, const PLMap& g) {
  CommuteReport rep;
  PLRelation finv = inverse_rel(graph_of(f));
  PLRelation gg = graph_of(g);
  rep.left = compose_rel(gg, finv);
  try {
    rep.right = compose_rel(finv, gg);
  } catch (const RegionError&) {
    // g o f^-1 never has area; a region on the right settles inequality.
    rep.region = true;
    return rep;
  }
  rep.equal = rel_equals(rep.left, rep.right);
  return rep;
}

bool strongly_commutes(const PLMap& f, const PLMap& g) { return strong_commute_report(f, g).equal; }

bool commutes(const PLMap& f, const PLMap& g) { return map_equals(compose(f, g), compose(g, f)); }

PLRelation restrict_rel(const PLRelation& r, const Interval& block) {
  std::vector<Arc> arcs;
  for (const auto& a : r.arcs()) {
    if (block.contains(a.dom())) {
      arcs.push_back(a);
      continue;
    }
    auto ov = intersect(a.dom(), block);
    if (!ov.ok || ov.iv.degenerate()) continue;
    if (a.kind == ArcKind::Mono)
      arcs.push_back(Arc::mono(restrict_to(a.h, ov.iv)));
    else if (a.kind == ArcKind::Horizontal)
      arcs.push_back(Arc::horizontal(ov.iv, a.level));
  }
  return PLRelation(std::move(arcs));
}

}  // namespace plent
