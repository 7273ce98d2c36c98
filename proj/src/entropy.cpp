#include "plent/entropy.hpp"

#include "plent/families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <map>
#include <numeric>
#include <sstream>

namespace plent {

int worker_threads() {
  const char* env = std::getenv("PLENT_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// ---------------------------------------------------------------- orbits

namespace {

std::vector<Rat> grid_points(const Rat& grid) {
  if (grid <= 0) throw DomainError("grid step must be positive");
  std::vector<Rat> pts;
  for (Rat x = 0; x <= 1; x += grid) pts.push_back(x);
  if (pts.back() != 1) pts.push_back(1);
  return pts;
}

std::vector<Rat> successors(const PLRelation& r, const Rat& x, const Rat& grid) {
  std::vector<Rat> out;
  for (const auto& c : evaluate_at(r, x)) {
    out.push_back(c.lo);
    if (c.degenerate()) continue;
    Rat q = c.lo / grid;
    mpz_class k = q.get_num() / q.get_den() + 1;
    for (Rat y = Rat(k) * grid; y < c.hi; y += grid) out.push_back(y);
    out.push_back(c.hi);
  }
  return out;
}

}  // namespace

OrbitSet enumerate_orbits(const PLRelation& r, int n, const Rat& grid, std::size_t cap) {
  if (n < 1) throw DomainError("orbit length must be positive");
  OrbitSet os;
  os.n = n;
  os.grid = grid;
  std::map<Rat, std::vector<Rat>> cache;
  auto succ = [&](const Rat& x) -> const std::vector<Rat>& {
    auto it = cache.find(x);
    if (it != cache.end()) return it->second;
    return cache.emplace(x, successors(r, x, grid)).first->second;
  };
  std::vector<std::vector<Rat>> layer;
  for (auto& x : grid_points(grid)) layer.push_back({x});
  for (int step = 1; step < n; ++step) {
    std::vector<std::vector<Rat>> next;
    for (const auto& orb : layer) {
      for (const auto& y : succ(orb.back())) {
        next.push_back(orb);
        next.back().push_back(y);
        if (next.size() > cap) throw ResourceError("orbit cap exceeded at length " +
                                                   std::to_string(step + 1));
      }
    }
    layer = std::move(next);
  }
  os.orbits = std::move(layer);
  return os;
}

bool orbit_valid(const PLRelation& r, const std::vector<Rat>& orbit) {
  for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
    auto fib = evaluate_at(r, orbit[i]);
    if (!set_contains(fib, {orbit[i + 1], orbit[i + 1]})) return false;
  }
  return true;
}

// ------------------------------------------------------- separated/spanning

namespace {

std::size_t max_clique(const std::vector<std::uint64_t>& adj) {
  std::size_t best = 0;
  std::function<void(std::size_t, std::uint64_t)> expand = [&](std::size_t size, std::uint64_t p) {
    if (!p) {
      best = std::max(best, size);
      return;
    }
    while (p) {
      if (size + std::popcount(p) <= best) return;
      int v = std::countr_zero(p);
      expand(size + 1, p & adj[v]);
      p &= ~(std::uint64_t{1} << v);
    }
  };
  std::uint64_t all = adj.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << adj.size()) - 1;
  expand(0, all);
  return best;
}

std::size_t min_cover(const std::vector<std::uint32_t>& cover, std::size_t n) {
  std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  for (std::size_t k = 1; k <= n; ++k) {
    // Gosper's hack over k-subsets
    std::uint64_t s = (std::uint64_t{1} << k) - 1;
    while (s < (std::uint64_t{1} << n)) {
      std::uint32_t u = 0;
      for (std::uint64_t t = s; t; t &= t - 1) u |= cover[std::countr_zero(t)];
      if (u == full) return k;
      std::uint64_t c = s & (~s + 1), r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  return n;
}

}  // namespace

CountResult separated_count(std::size_t n, const DistanceFn& d, double eps,
                            std::size_t exact_limit) {
  CountResult res;
  if (n == 0) return res;
  if (n <= exact_limit && n <= 64) {
    std::vector<std::uint64_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (d(i, j) > eps) {
          adj[i] |= std::uint64_t{1} << j;
          adj[j] |= std::uint64_t{1} << i;
        }
    res.count = max_clique(adj);
    res.exact = true;
    return res;
  }
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    bool sep = true;
    for (std::size_t c : chosen)
      if (d(i, c) <= eps) {
        sep = false;
        break;
      }
    if (sep) chosen.push_back(i);
  }
  res.count = chosen.size();
  return res;
}

CountResult spanning_count(std::size_t n, const DistanceFn& d, double eps,
                           std::size_t exact_limit) {
  CountResult res;
  if (n == 0) return res;
  if (n <= exact_limit && n <= 32) {
    std::vector<std::uint32_t> cover(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i == j || d(i, j) <= eps) cover[i] |= 1u << j;
    res.count = min_cover(cover, n);
    res.exact = true;
    return res;
  }
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i) {
    nb[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j)
      if (d(i, j) <= eps) {
        nb[i].push_back(j);
        nb[j].push_back(i);
      }
  }
  std::vector<std::size_t> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = nb[i].size();
  std::vector<bool> covered(n, false);
  std::size_t left = n, picks = 0;
  while (left) {
    std::size_t best = std::max_element(gain.begin(), gain.end()) - gain.begin();
    ++picks;
    for (std::size_t u : nb[best]) {
      if (covered[u]) continue;
      covered[u] = true;
      --left;
      for (std::size_t w : nb[u]) --gain[w];
    }
  }
  res.count = picks;
  return res;
}

namespace {

std::vector<std::vector<double>> as_doubles(const OrbitSet& o) {
  std::vector<std::vector<double>> v;
  v.reserve(o.orbits.size());
  for (const auto& orb : o.orbits) {
    std::vector<double> row;
    for (const auto& x : orb) row.push_back(x.get_d());
    v.push_back(std::move(row));
  }
  return v;
}

DistanceFn sup_distance(const std::vector<std::vector<double>>& v) {
  return [&v](std::size_t i, std::size_t j) {
    double m = 0;
    for (std::size_t t = 0; t < v[i].size(); ++t) m = std::max(m, std::abs(v[i][t] - v[j][t]));
    return m;
  };
}

}  // namespace

CountResult separated_count(const OrbitSet& o, double eps, std::size_t exact_limit) {
  auto v = as_doubles(o);
  return separated_count(v.size(), sup_distance(v), eps, exact_limit);
}

CountResult spanning_count(const OrbitSet& o, double eps, std::size_t exact_limit) {
  auto v = as_doubles(o);
  return spanning_count(v.size(), sup_distance(v), eps, exact_limit);
}

EstimateTable entropy_estimate(const PLRelation& r, const std::vector<double>& eps_schedule,
                               int n_max, const Rat& grid, std::size_t cap,
                               std::size_t span_limit) {
  EstimateTable t;
  std::vector<double> eps = eps_schedule;
  std::sort(eps.rbegin(), eps.rend());
  for (int n = 1; n <= n_max; ++n) {
    auto orbs = enumerate_orbits(r, n, grid, cap);
    auto v = as_doubles(orbs);
    auto d = sup_distance(v);
    std::size_t prev = 0;
    for (double e : eps) {
      EstimateRow row;
      row.n = n;
      row.eps = e;
      row.grid = grid;
      row.s_count = separated_count(v.size(), d, e).count;
      if (v.size() <= span_limit) row.r_count = spanning_count(v.size(), d, e).count;
      row.estimate = row.s_count ? std::log(static_cast<double>(row.s_count)) / n : 0.0;
      if (row.s_count < prev) t.monotone_in_eps = false;
      prev = row.s_count;
      t.rows.push_back(row);
    }
  }
  return t;
}

// -------------------------------------------------------------- horseshoes

std::string relation_id(const PLRelation& r) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& s : canonical_segments(r)) {
    mix(to_string(s.a.x));
    mix(",");
    mix(to_string(s.a.y));
    mix(";");
    mix(to_string(s.b.x));
    mix(",");
    mix(to_string(s.b.y));
    mix("|");
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace {

// Arcs sorted by left domain end, for windowed image queries.
class ImageIndex {
 public:
  explicit ImageIndex(const PLRelation& r) : arcs_(r.arcs()) {
    std::sort(arcs_.begin(), arcs_.end(),
              [](const Arc& a, const Arc& b) { return a.dom().lo < b.dom().lo; });
    for (const auto& a : arcs_) {
      los_.push_back(a.dom().lo);
      Rat len = a.dom().length();
      if (len > maxlen_) maxlen_ = len;
    }
  }

  IntervalSet image(const Interval& in) const {
    Rat start = in.lo - maxlen_;
    auto b = std::lower_bound(los_.begin(), los_.end(), start);
    auto e = std::upper_bound(los_.begin(), los_.end(), in.hi);
    std::vector<Arc> part(arcs_.begin() + (b - los_.begin()), arcs_.begin() + (e - los_.begin()));
    return image_of(PLRelation(std::move(part)), in);
  }

 private:
  std::vector<Arc> arcs_;
  std::vector<Rat> los_;
  Rat maxlen_ = 0;
};

IntervalSet intersect_sets(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    auto ov = intersect(a[i], b[j]);
    if (ov.ok) out.push_back(ov.iv);
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

bool disjoint_sorted(const std::vector<Interval>& f) {
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (!(f[i].hi < f[i + 1].lo)) return false;
  return true;
}

// Drop families whose images miss others, shrink the rest into the common
// image, until the horseshoe inclusion holds or nothing is left.
std::vector<Interval> refine(const ImageIndex& idx, std::vector<Interval> fam) {
  for (int iter = 0; iter < 64 && fam.size() >= 2; ++iter) {
    std::vector<IntervalSet> imgs;
    imgs.reserve(fam.size());
    for (const auto& a : fam) imgs.push_back(idx.image(a));
    IntervalSet common = imgs[0];
    for (std::size_t j = 1; j < imgs.size() && !common.empty(); ++j)
      common = intersect_sets(common, imgs[j]);
    bool all_in = true, all_meet = true;
    std::vector<Interval> shrunk;
    for (const auto& a : fam) {
      if (set_contains(common, a)) {
        shrunk.push_back(a);
        continue;
      }
      all_in = false;
      Interval best;
      bool found = false;
      for (const auto& c : intersect_sets(common, {a})) {
        if (c.degenerate()) continue;
        if (!found || c.length() > best.length()) {
          best = c;
          found = true;
        }
      }
      if (!found) {
        all_meet = false;
        break;
      }
      shrunk.push_back(best);
    }
    if (all_in) return fam;
    if (all_meet) {
      fam = std::move(shrunk);
      continue;
    }
    // drop the members whose images meet the fewest others
    std::vector<std::size_t> cover(fam.size(), 0);
    for (std::size_t j = 0; j < fam.size(); ++j) {
      std::size_t p = 0;
      for (const auto& a : fam) {
        while (p < imgs[j].size() && imgs[j][p].hi <= a.lo) ++p;
        if (p < imgs[j].size() && imgs[j][p].lo < a.hi) ++cover[j];
      }
    }
    std::size_t low = *std::min_element(cover.begin(), cover.end());
    // either the members outside the common image go, or the weakest
    // coverers do; remove the smaller group
    std::vector<Interval> meet, strong;
    for (std::size_t j = 0; j < fam.size(); ++j) {
      bool inside = false;
      for (const auto& c : intersect_sets(common, {fam[j]}))
        if (!c.degenerate()) inside = true;
      if (inside) meet.push_back(fam[j]);
      if (cover[j] > low) strong.push_back(fam[j]);
    }
    std::vector<Interval> kept = meet.size() >= strong.size() ? meet : strong;
    if (kept.empty()) return {};
    fam = std::move(kept);
  }
  return {};
}

std::vector<Interval> elementary_partition(const PLRelation& r) {
  std::vector<Rat> cuts{0, 1};
  PLRelation canon = canonicalize(r);
  for (const auto& a : canon.arcs()) {
    Interval d = a.dom();
    cuts.push_back(d.lo);
    cuts.push_back(d.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back({cuts[i], cuts[i + 1]});
  return out;
}

std::vector<Interval> uniform_odd(std::size_t N) {
  std::vector<Interval> out;
  long pieces = 2 * static_cast<long>(N) - 1;
  for (long i = 0; i < pieces; i += 2) out.push_back({rat(i, pieces), rat(i + 1, pieces)});
  return out;
}

std::vector<std::vector<Interval>> variants(std::vector<Interval> pool) {
  std::sort(pool.begin(), pool.end());
  pool.erase(std::remove_if(pool.begin(), pool.end(), [](const Interval& a) { return a.degenerate(); }),
             pool.end());
  std::vector<std::vector<Interval>> out;
  if (pool.empty()) return out;
  if (disjoint_sorted(pool)) out.push_back(pool);
  std::vector<Interval> even, odd;
  for (std::size_t i = 0; i < pool.size(); ++i) (i % 2 ? odd : even).push_back(pool[i]);
  if (disjoint_sorted(even)) out.push_back(even);
  if (disjoint_sorted(odd)) out.push_back(odd);
  Rat minlen = pool[0].length();
  for (const auto& a : pool)
    if (a.length() < minlen) minlen = a.length();
  Rat sz = static_cast<long>(pool.size());
  for (Rat delta : {Rat(minlen / 8), Rat(minlen / (2 * sz * sz))}) {
    std::vector<Interval> sh;
    for (const auto& a : pool) sh.push_back({a.lo + delta, a.hi - delta});
    if (disjoint_sorted(sh)) out.push_back(sh);
  }
  return out;
}

HorseshoeCert make_cert(const PLRelation& r, std::vector<Interval> fam) {
  HorseshoeCert c;
  c.N = fam.size();
  c.intervals = std::move(fam);
  c.relation_id = relation_id(r);
  return c;
}

std::vector<Interval> search(const PLRelation& r, const std::vector<Interval>& hints,
                             std::size_t want) {
  ImageIndex idx(r);
  std::vector<Interval> best;
  std::vector<std::vector<Interval>> pools;
  if (!hints.empty()) pools.push_back(hints);
  pools.push_back(elementary_partition(r));
  if (want >= 2) pools.push_back(uniform_odd(want));
  else
    for (std::size_t m = 2; m <= 8; ++m) pools.push_back(uniform_odd(m));
  for (const auto& pool : pools) {
    for (auto& fam : variants(pool)) {
      if (fam.size() <= best.size() || fam.size() < 2) continue;
      auto got = refine(idx, std::move(fam));
      if (got.size() > best.size()) best = std::move(got);
      if (want && best.size() >= want) return best;
    }
  }
  return best;
}

}  // namespace

bool verify_horseshoe(const PLRelation& r, const std::vector<Interval>& intervals) {
  if (intervals.empty()) return false;
  std::vector<Interval> f = intervals;
  std::sort(f.begin(), f.end());
  if (!disjoint_sorted(f)) return false;
  for (const auto& a : f) {
    if (a.lo < 0 || a.hi > 1) return false;
    auto img = image_of(r, a);
    for (const auto& b : f)
      if (!set_contains(img, b)) return false;
  }
  return true;
}

std::optional<HorseshoeCert> find_horseshoe(const PLRelation& r, std::size_t N,
                                            const std::vector<Interval>& hints) {
  if (N < 2) throw DomainError("horseshoe search needs N >= 2");
  auto fam = search(r, hints, N);
  if (fam.size() < N) return std::nullopt;
  fam.resize(N);
  if (!verify_horseshoe(r, fam)) return std::nullopt;
  return make_cert(r, std::move(fam));
}

HorseshoeCert largest_horseshoe(const PLRelation& r, const std::vector<Interval>& hints) {
  auto fam = search(r, hints, 0);
  if (!fam.empty() && !verify_horseshoe(r, fam)) fam.clear();
  return make_cert(r, std::move(fam));
}

namespace {

void push_bound(IterateBound& b, int k, HorseshoeCert cert, bool keep) {
  std::size_t n = cert.N;
  b.sizes.push_back(n);
  double v = n >= 2 ? std::log(static_cast<double>(n)) / k : 0.0;
  b.best = std::max(b.best, v);
  b.running.push_back(b.best);
  if (keep) b.certs.push_back(std::move(cert));
}

}  // namespace

IterateBound iterate_horseshoe_bound(const PLRelation& r, int k_max) {
  IterateBound b;
  PLRelation pw = canonicalize(r);
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) pw = compose_rel(r, pw);
    push_bound(b, k, largest_horseshoe(pw), true);
  }
  return b;
}

IterateBound param_horseshoe_bound(const PLMap& f, const PLMap& g, int k_max, bool keep_certs) {
  IterateBound b;
  PLMap fk = f, gk = g;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) {
      fk = compose(f, fk);
      gk = compose(g, gk);
    }
    PLRelation rel = param_graph(fk, gk);
    std::vector<std::pair<PLRelation, std::vector<Interval>>> sides{{rel, laps(gk)},
                                                                    {inverse_rel(rel), laps(fk)}};
    if (sides[1].second.size() > sides[0].second.size()) std::swap(sides[0], sides[1]);
    // odd laps first, the full search only when both orientations miss
    std::optional<HorseshoeCert> got;
    for (const auto& [r, hints] : sides) {
      std::size_t want = (hints.size() + 1) / 2;
      if (want >= 2 && (got = find_horseshoe(r, want, hints))) break;
    }
    if (!got) {
      auto c1 = largest_horseshoe(sides[0].first, sides[0].second);
      auto c2 = largest_horseshoe(sides[1].first, sides[1].second);
      got = c2.N > c1.N ? std::move(c2) : std::move(c1);
    }
    push_bound(b, k, std::move(*got), keep_certs);
  }
  return b;
}

BracketReport bracket_theorem_main(int n, int m, int k_max, bool keep_certs) {
  if (!strongly_commutes(tent(m), tent(n)))
    throw PreconditionError("tent maps " + std::to_string(n) + " and " + std::to_string(m) +
                            " do not commute strongly");
  BracketReport rep;
  rep.n = n;
  rep.m = m;
  rep.k_max = k_max;
  int big = std::max(n, m);
  rep.target = std::log(static_cast<double>(big));

  auto lower_arm = [&] { return param_horseshoe_bound(tent(m), tent(n), k_max, keep_certs); };
  auto upper_arm = [&] { return branch_counts(tent(m), tent(n), k_max); };
  IterateBound lo;
  BranchCounts up;
  if (worker_threads() > 1) {
    auto fut = std::async(std::launch::async, upper_arm);
    lo = lower_arm();
    up = fut.get();
  } else {
    lo = lower_arm();
    up = upper_arm();
  }
  if (!up.complete || static_cast<int>(up.rows.size()) < k_max)
    rep.failures.push_back("branch recursion stopped early");

  mpz_class pw = 1;
  std::size_t kk = std::min<std::size_t>(lo.sizes.size(), up.rows.size());
  for (std::size_t i = 0; i < kk; ++i) {
    int k = static_cast<int>(i) + 1;
    pw *= big;
    mpz_class nk = static_cast<unsigned long>(lo.sizes[i]);
    mpz_class mk = static_cast<unsigned long>(up.rows[i].count);
    rep.horseshoe_sizes.push_back(lo.sizes[i]);
    rep.branch_counts.push_back(up.rows[i].count);
    rep.lower.push_back(lo.running[i]);
    rep.upper.push_back(up.rows[i].log_growth);
    std::string at = " at k=" + std::to_string(k);
    if (nk > pw) rep.failures.push_back("horseshoe exceeds target" + at);
    if (2 * nk < pw) rep.failures.push_back("horseshoe below n^k/2" + at);
    if (mk < pw) rep.failures.push_back("branch count below target" + at);
    if (mk > (k + 1) * pw) rep.failures.push_back("branch count above (k+1) n^k" + at);
    if (i > 0 && rep.lower[i] < rep.lower[i - 1]) rep.failures.push_back("lower not monotone" + at);
    if (i > 0 && rep.upper[i] > rep.upper[i - 1]) rep.failures.push_back("upper not monotone" + at);
  }
  rep.certs = std::move(lo.certs);
  return rep;
}

}  // namespace plent
