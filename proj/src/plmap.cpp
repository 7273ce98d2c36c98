#include "plent/plmap.hpp"

#include <algorithm>
#include <cmath>

namespace plent {

namespace {

bool collinear(const Point& a, const Point& b, const Point& c) {
  return (b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x);
}

}  // namespace

PLMap::PLMap(std::vector<Point> bp) {
  if (bp.size() < 2) throw DomainError("a PL map needs at least two breakpoints");
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const auto& p = bp[i];
    if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
      throw DomainError("breakpoint outside the unit square: (" + to_string(p.x) + "," +
                        to_string(p.y) + ")");
    if (i > 0 && !(bp[i - 1].x < p.x))
      throw DomainError("breakpoint x-coordinates must increase strictly");
  }
  bp_.reserve(bp.size());
  for (auto& p : bp) {
    while (bp_.size() >= 2 && collinear(bp_[bp_.size() - 2], bp_.back(), p)) bp_.pop_back();
    bp_.push_back(std::move(p));
  }
}

Interval PLMap::image() const {
  Rat lo = bp_.front().y, hi = bp_.front().y;
  for (const auto& p : bp_) {
    if (p.y < lo) lo = p.y;
    if (p.y > hi) hi = p.y;
  }
  return {lo, hi};
}

Rat PLMap::slope(std::size_t i) const {
  return (bp_[i + 1].y - bp_[i].y) / (bp_[i + 1].x - bp_[i].x);
}

int PLMap::sign(std::size_t i) const { return sgn(bp_[i + 1].y - bp_[i].y); }

Rat PLMap::operator()(const Rat& x) const {
  if (x < lo() || x > hi())
    throw DomainError("eval outside domain: " + to_string(x) + " not in " +
                      to_string(domain()));
  auto it = std::lower_bound(bp_.begin(), bp_.end(), x,
                             [](const Point& p, const Rat& v) { return p.x < v; });
  if (it->x == x) return it->y;
  const Point& b = *it;
  const Point& a = *(it - 1);
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

bool PLMap::operator<(const PLMap& o) const {
  std::size_t n = std::min(bp_.size(), o.bp_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(bp_[i].x, o.bp_[i].x);
    if (c) return c < 0;
    c = cmp(bp_[i].y, o.bp_[i].y);
    if (c) return c < 0;
  }
  return bp_.size() < o.bp_.size();
}

PLMap identity_map(const Interval& dom) { return PLMap({{dom.lo, dom.lo}, {dom.hi, dom.hi}}); }

PLMap linear_map(const Point& a, const Point& b) { return PLMap({a, b}); }

Rat eval(const PLMap& f, const Rat& x) { return f(x); }

PLMap compose(const PLMap& f, const PLMap& g, std::size_t cap) {
  Interval gi = g.image();
  if (!f.domain().contains(gi))
    throw CompositionError("range " + to_string(gi) + " not inside domain " +
                           to_string(f.domain()));
  const auto& gb = g.breakpoints();
  const auto& fb = f.breakpoints();
  std::vector<Point> out;
  out.reserve(gb.size() + fb.size());
  out.push_back({gb[0].x, f(gb[0].y)});
  for (std::size_t i = 0; i + 1 < gb.size(); ++i) {
    const Point& a = gb[i];
    const Point& b = gb[i + 1];
    if (a.y != b.y) {
      bool up = a.y < b.y;
      const Rat& ylo = up ? a.y : b.y;
      const Rat& yhi = up ? b.y : a.y;
      auto first = std::upper_bound(fb.begin(), fb.end(), ylo,
                                    [](const Rat& v, const Point& p) { return v < p.x; });
      auto last = std::lower_bound(fb.begin(), fb.end(), yhi,
                                   [](const Point& p, const Rat& v) { return p.x < v; });
      Rat dx_dy = (b.x - a.x) / (b.y - a.y);
      auto emit = [&](const Point& q) {
        out.push_back({a.x + (q.x - a.y) * dx_dy, q.y});
        if (out.size() > cap) throw ResourceError("breakpoint cap exceeded in compose");
      };
      if (up)
        for (auto it = first; it < last; ++it) emit(*it);
      else
        for (auto it = last; it > first;) emit(*--it);
    }
    out.push_back({b.x, f(b.y)});
    if (out.size() > cap) throw ResourceError("breakpoint cap exceeded in compose");
  }
  return PLMap(std::move(out));
}

PLMap iterate(const PLMap& f, int k, std::size_t cap) {
  if (k < 1) throw DomainError("iterate needs k >= 1");
  PLMap r = f;
  for (int i = 1; i < k; ++i) r = compose(f, r, cap);
  return r;
}

std::vector<Rat> critical_points(const PLMap& f) {
  std::vector<Rat> out;
  for (std::size_t i = 1; i < f.pieces(); ++i)
    if (f.sign(i - 1) != f.sign(i)) out.push_back(f.breakpoints()[i].x);
  return out;
}

std::vector<Interval> laps(const PLMap& f) {
  std::vector<Interval> out;
  const auto& b = f.breakpoints();
  Rat start = b[0].x;
  for (std::size_t i = 1; i < f.pieces(); ++i) {
    if (f.sign(i - 1) != f.sign(i)) {
      out.push_back({start, b[i].x});
      start = b[i].x;
    }
  }
  out.push_back({start, b.back().x});
  return out;
}

std::size_t lap_count(const PLMap& f) {
  std::size_t n = 1;
  for (std::size_t i = 1; i < f.pieces(); ++i)
    if (f.sign(i - 1) != f.sign(i)) ++n;
  return n;
}

bool map_equals(const PLMap& f, const PLMap& g) { return f == g; }

bool is_open_onto(const PLMap& f) {
  if (f.lo() != 0 || f.hi() != 1) return false;
  for (const auto& lap : laps(f)) {
    Rat a = f(lap.lo), b = f(lap.hi);
    if (!((a == 0 && b == 1) || (a == 1 && b == 0))) return false;
  }
  return true;
}

PLMap restrict_to(const PLMap& f, const Interval& dom) {
  if (!f.domain().contains(dom) || dom.degenerate())
    throw DomainError("restriction " + to_string(dom) + " not inside " + to_string(f.domain()));
  std::vector<Point> out{{dom.lo, f(dom.lo)}};
  for (const auto& p : f.breakpoints())
    if (dom.lo < p.x && p.x < dom.hi) out.push_back(p);
  out.push_back({dom.hi, f(dom.hi)});
  return PLMap(std::move(out));
}

PLMap inverse(const PLMap& h) {
  int s = h.sign(0);
  for (std::size_t i = 0; i < h.pieces(); ++i)
    if (h.sign(i) == 0 || h.sign(i) != s) throw HomeoError("map is not strictly monotone");
  std::vector<Point> out;
  out.reserve(h.breakpoints().size());
  for (const auto& p : h.breakpoints()) out.push_back({p.y, p.x});
  if (s < 0) std::reverse(out.begin(), out.end());
  return PLMap(std::move(out));
}

bool is_homeomorphism(const PLMap& h, const Interval& onto) {
  if (!(h.domain() == onto) || !(h.image() == onto)) return false;
  int s = h.sign(0);
  if (s == 0) return false;
  for (std::size_t i = 0; i < h.pieces(); ++i)
    if (h.sign(i) != s) return false;
  return true;
}

PLMap conjugate(const PLMap& h, const PLMap& f) {
  if (!is_homeomorphism(h)) throw HomeoError("conjugating map is not a homeomorphism of [0,1]");
  return compose(inverse(h), compose(f, h));
}

PLMap glue(const std::vector<PLMap>& parts) {
  if (parts.empty()) throw DomainError("nothing to glue");
  std::vector<Point> out = parts[0].breakpoints();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& b = parts[i].breakpoints();
    if (!(b.front() == out.back()))
      throw DomainError("glued pieces do not meet at x=" + to_string(b.front().x));
    out.insert(out.end(), b.begin() + 1, b.end());
  }
  return PLMap(std::move(out));
}

std::vector<Interval> preimage(const PLMap& f, const Rat& y) {
  std::vector<Interval> out;
  const auto& b = f.breakpoints();
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    const Point& p = b[i];
    const Point& q = b[i + 1];
    if (p.y == q.y) {
      if (p.y == y) out.push_back({p.x, q.x});
      continue;
    }
    Rat lo = p.y < q.y ? p.y : q.y;
    Rat hi = p.y < q.y ? q.y : p.y;
    if (y < lo || y > hi) continue;
    Rat x = p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y);
    out.push_back({x, x});
  }
  return merge_intervals(std::move(out));
}

bool constant_slope_entropy(const PLMap& f, Rat& s) {
  s = abs(f.slope(0));
  if (s < 1) return false;
  std::size_t n = f.pieces();
  std::size_t run = 0;
  while (run < n && abs(f.slope(run)) == s) ++run;
  if (run == n) return true;
  // Invariant core [lo, c] with slope s, then one increasing lap.
  const auto& b = f.breakpoints();
  for (std::size_t cut = run; cut >= 1; --cut) {
    const Rat& c = b[cut].x;
    bool inv = true;
    for (std::size_t i = 0; i <= cut && inv; ++i)
      if (b[i].y < f.lo() || b[i].y > c) inv = false;
    bool inc = true;
    for (std::size_t i = cut; i < n && inc; ++i)
      if (f.sign(i) <= 0) inc = false;
    if (inv && inc) return true;
  }
  return false;
}

LapGrowth entropy_lap_growth(const PLMap& f, int n_max, std::size_t cap) {
  LapGrowth g;
  if (constant_slope_entropy(f, g.slope)) {
    g.constant_slope = true;
    g.exact = log_rat(g.slope);
  }
  PLMap fn = f;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) {
      try {
        fn = compose(f, fn, cap);
      } catch (const ResourceError& e) {
        throw LapGrowthExhausted(e.what(), g);
      }
    }
    std::size_t l = lap_count(fn);
    g.laps.push_back(l);
    g.terms.push_back(l > 1 ? std::log(static_cast<double>(l - 1)) / n : 0.0);
  }
  return g;
}

}  // namespace plent
