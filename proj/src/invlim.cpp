#include "plent/invlim.hpp"

#include <algorithm>
#include <cmath>

#include "plent/families.hpp"

namespace plent {

DiagonalSystem::DiagonalSystem(Generator f, Generator g, std::string name, int depth_budget)
    : fgen_(std::move(f)), ggen_(std::move(g)), name_(std::move(name)), budget_(depth_budget) {}

const PLMap& DiagonalSystem::fetch(const Generator& gen, std::map<int, PLMap>& cache, int i) const {
  if (i < 1) throw DomainError("maps are indexed from 1");
  if (i > budget_ + 1) throw DepthError("level " + std::to_string(i) + " beyond depth budget");
  auto it = cache.find(i);
  if (it != cache.end()) return it->second;
  return cache.emplace(i, gen(i)).first->second;
}

const PLMap& DiagonalSystem::f(int i) const { return fetch(fgen_, fcache_, i); }
const PLMap& DiagonalSystem::g(int i) const { return fetch(ggen_, gcache_, i); }

DiagonalSystem constant_system(const PLMap& f, const PLMap& g) {
  return DiagonalSystem([f](int) { return f; }, [g](int) { return g; }, "constant");
}

DiagonalSystem shift_system(const PLMap& f) {
  // g = f o f gives Psi(x)_i = f(f(x_{i+1})) = f(x_i), the natural extension
  PLMap ff = compose(f, f);
  return DiagonalSystem([f](int) { return f; }, [ff](int) { return ff; }, "shift");
}

DiagonalSystem appendix_system(const std::vector<int>& n_seq, const Rat& s) {
  if (n_seq.empty()) throw DomainError("appendix system needs a non-empty n_seq");
  auto seq_for = [n_seq](int k) {
    std::vector<int> out;
    for (int i = 0; i < k; ++i) out.push_back(n_seq[i % n_seq.size()]);
    return out;
  };
  return DiagonalSystem([=](int k) { return appendix_pair(k, seq_for(k), s).f; },
                        [=](int k) { return appendix_pair(k, seq_for(k), s).g; }, "appendix", 24);
}

CompatResult check_diagonal_compat(const DiagonalSystem& sys, int depth) {
  CompatResult res;
  for (int i = 1; i <= depth; ++i) {
    if (!map_equals(compose(sys.g(i), sys.f(i + 1)), compose(sys.f(i), sys.g(i + 1)))) {
      res.ok = false;
      res.level = i;
      return res;
    }
  }
  return res;
}

PLRelation psi_component(const DiagonalSystem& sys, int i) {
  if (i < 0) throw DomainError("psi level must be >= 0");
  return param_graph(sys.f(i + 1), sys.g(i + 1));
}

TruncatedPoint make_point(const DiagonalSystem& sys, int depth, const Rat& x_depth) {
  if (depth < 0) throw DepthError("negative depth");
  TruncatedPoint p;
  p.coords.assign(depth + 1, Rat(0));
  p.coords[depth] = x_depth;
  for (int i = depth; i >= 1; --i) p.coords[i - 1] = sys.f(i)(p.coords[i]);
  return p;
}

TruncatedPoint pull_back_point(const DiagonalSystem& sys, int depth, const Rat& x0) {
  if (depth < 0) throw DepthError("negative depth");
  TruncatedPoint p;
  p.coords.push_back(x0);
  for (int i = 1; i <= depth; ++i) {
    auto pre = preimage(sys.f(i), p.coords.back());
    if (pre.empty()) throw DomainError("bonding map misses a coordinate at level " + std::to_string(i));
    p.coords.push_back(pre.front().lo);
  }
  return p;
}

bool is_consistent(const DiagonalSystem& sys, const TruncatedPoint& p) {
  for (int i = 1; i <= p.depth(); ++i)
    if (sys.f(i)(p.coords[i]) != p.coords[i - 1]) return false;
  return true;
}

TruncatedPoint apply_diagonal(const DiagonalSystem& sys, const TruncatedPoint& p) {
  if (p.depth() < 1) throw DepthError("diagonal step needs depth >= 1; start deeper");
  TruncatedPoint q;
  q.coords.reserve(p.depth());
  for (int i = 0; i < p.depth(); ++i) q.coords.push_back(sys.g(i + 1)(p.coords[i + 1]));
  if (!is_consistent(sys, q))
    throw ConstructionError("diagonal image breaks bonding consistency; maps do not commute");
  return q;
}

MetricValue truncated_metric(const TruncatedPoint& p, const TruncatedPoint& q) {
  if (p.depth() != q.depth()) throw DomainError("metric needs equal depths");
  MetricValue m;
  Rat w = 1;
  for (int i = 0; i <= p.depth(); ++i) {
    m.value += abs(Rat(p.coords[i] - q.coords[i])) * w;
    w /= 2;
  }
  m.tail = w * 2;
  return m;
}

bool lift_condition(const DiagonalSystem& sys, int i) {
  try {
    PLRelation left = compose_rel(graph_of(sys.g(i + 1)), inverse_rel(graph_of(sys.f(i + 1))));
    PLRelation right = compose_rel(inverse_rel(graph_of(sys.f(i))), graph_of(sys.g(i)));
    return rel_equals(left, right);
  } catch (const RegionError&) {
    return false;
  }
}

namespace {

// Smallest point of the intersection of two preimage sets.
bool smallest_common(const std::vector<Interval>& a, const std::vector<Interval>& b, Rat& out) {
  bool found = false;
  for (const auto& x : a)
    for (const auto& y : b) {
      auto ov = intersect(x, y);
      if (ov.ok && (!found || ov.iv.lo < out)) {
        out = ov.iv.lo;
        found = true;
      }
    }
  return found;
}

}  // namespace

TruncatedPoint lift_orbit(const DiagonalSystem& sys, int level, const std::vector<Rat>& orbit,
                          int depth) {
  const int m = level, L = static_cast<int>(orbit.size());
  if (m < 0 || L < 1) throw DomainError("lift needs level >= 0 and a non-empty orbit");
  if (depth < m + L - 1) throw DepthError("lift needs depth >= level + orbit length - 1");
  PLRelation psi = psi_component(sys, m);
  for (int k = 0; k + 1 < L; ++k)
    if (!set_contains(evaluate_at(psi, orbit[k]), {orbit[k + 1], orbit[k + 1]}))
      throw DomainError("not an orbit of psi at step " + std::to_string(k));
  for (int i = m + 1; i <= m + L - 2; ++i)
    if (!lift_condition(sys, i))
      throw LiftError(i, "g_{i+1} o f_{i+1}^-1 != f_i^-1 o g_i at level " + std::to_string(i));

  std::vector<Rat> x(depth + 1);
  x[m] = orbit[0];
  PLMap G = identity_map();
  for (int j = 1; j < L; ++j) {
    G = j == 1 ? sys.g(m + 1) : compose(G, sys.g(m + j));
    if (!smallest_common(preimage(sys.f(m + j), x[m + j - 1]), preimage(G, orbit[j]), x[m + j]))
      throw LiftError(m + j - 1, "no admissible preimage at level " + std::to_string(m + j));
  }
  for (int i = m + L; i <= depth; ++i) {
    auto pre = preimage(sys.f(i), x[i - 1]);
    if (pre.empty()) throw DomainError("bonding map misses a coordinate at level " + std::to_string(i));
    x[i] = pre.front().lo;
  }
  for (int i = m - 1; i >= 0; --i) x[i] = sys.f(i + 1)(x[i + 1]);

  TruncatedPoint p{x};
  TruncatedPoint it = p;
  for (int k = 0; k < L; ++k) {
    if (k) it = apply_diagonal(sys, it);
    if (it.coords[m] != orbit[k]) throw ConstructionError("lifted point misses the orbit");
  }
  return p;
}

std::vector<DiagonalRow> entropy_estimate_diagonal(const DiagonalSystem& sys, int depth, int n_max,
                                                   double eps, const Rat& grid,
                                                   const DiagonalEstimateOptions& opt) {
  if (depth < 0 || n_max < 1) throw DomainError("estimate needs depth >= 0 and n_max >= 1");
  if (grid <= 0) throw DomainError("grid step must be positive");
  std::vector<DiagonalRow> rows;
  const int D = depth + n_max - 1;
  const double tail = std::ldexp(1.0, -depth);

  // traj[p][j] = weighted coordinates of Psi^j(point p), truncated to depth
  std::vector<std::vector<std::vector<double>>> traj;
  Rat x = 0;
  while (true) {
    if (traj.size() >= opt.cap) throw ResourceError("point cap exceeded");
    TruncatedPoint p = opt.seed_top ? make_point(sys, D, x) : pull_back_point(sys, D, x);
    std::vector<std::vector<double>> t;
    for (int j = 0; j < n_max; ++j) {
      if (j) p = apply_diagonal(sys, p);
      std::vector<double> w;
      for (int i = 0; i <= depth; ++i) w.push_back(std::ldexp(p.coords[i].get_d(), -i));
      t.push_back(std::move(w));
    }
    traj.push_back(std::move(t));
    if (x == 1) break;
    x += grid;
    if (x > 1) x = 1;
  }
  for (int n = 1; n <= n_max; ++n) {
    DistanceFn d = [&traj, n](std::size_t a, std::size_t b) {
      double best = 0;
      for (int j = 0; j < n; ++j) {
        double s = 0;
        const auto &u = traj[a][j], &v = traj[b][j];
        for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - v[i]);
        best = std::max(best, s);
      }
      return best;
    };
    auto c = separated_count(traj.size(), d, eps);
    rows.push_back({-1, n, eps, c.count, std::log(static_cast<double>(c.count)) / n, tail});
  }

  for (int lvl : opt.psi_levels) {
    PLRelation psi = psi_component(sys, lvl);
    for (int n = 1; n <= opt.psi_n_max; ++n) {
      OrbitSet os;
      try {
        os = enumerate_orbits(psi, n, opt.psi_grid, opt.cap);
      } catch (const ResourceError&) {
        break;
      }
      auto c = separated_count(os, eps);
      rows.push_back({lvl, n, eps, c.count, std::log(static_cast<double>(c.count)) / n, 0.0});
    }
  }
  return rows;
}

namespace {

std::string block_kind(int b, int k) {
  if (b == 1) return "slope";
  if (b <= k) return "fold_partner";
  if (b == k + 1) return "tent_union_diagonal";
  return "plateau";
}

}  // namespace

AppendixReport appendix_report(const std::vector<int>& n_seq, const Rat& s, int k_max, int k_b,
                               int first_block_iterates) {
  AppendixReport rep;
  rep.s = s;
  rep.n_seq = n_seq;
  DiagonalSystem sys = appendix_system(n_seq, s);
  const double log_s = std::log(s.get_d());
  for (int k = 1; k <= k_max; ++k) {
    AppendixLevel lv;
    lv.k = k;
    lv.n_k = n_seq[(k - 1) % n_seq.size()];
    lv.compatible = check_diagonal_compat(sys, k).ok;
    lv.target = std::max(log_s, std::log(static_cast<double>(lv.n_k)));
    lv.k_b = k_b;
    PLRelation psi = psi_component(sys, k - 1);
    for (int b = 1; b <= k + 2; ++b) {
      AppendixBlock blk;
      blk.block = b;
      blk.kind = block_kind(b, k);
      PLRelation r = restrict_rel(psi, dyadic_block(b));
      blk.arcs = r.size();
      if (b == 1) {
        auto ib = iterate_horseshoe_bound(r, first_block_iterates);
        blk.lower = ib.best;
        lv.first_block_lower = ib.best;
        std::size_t best = 0;
        for (std::size_t j = 0; j < ib.certs.size(); ++j)
          if (ib.running[j] == ib.best && ib.certs[j].N >= 2) best = j;
        if (!ib.certs.empty()) blk.cert = ib.certs[best];
      } else {
        blk.cert = largest_horseshoe(r);
        blk.lower = blk.cert.N >= 2 ? std::log(static_cast<double>(blk.cert.N)) : 0.0;
      }
      int n_b = b == k + 1 ? lv.n_k : 1;
      auto bc = branch_counts(r, std::max(n_b, 2), k_b);
      for (const auto& row : bc.rows) blk.branch.push_back(row.count);
      if (!bc.rows.empty()) blk.upper = bc.rows.back().log_growth;
      lv.lower = std::max(lv.lower, blk.lower);
      lv.upper = std::max(lv.upper, blk.upper);
      lv.blocks.push_back(std::move(blk));
    }
    rep.levels.push_back(std::move(lv));
  }
  // an exact orbit of psi_1 of length 3, lifted through the system
  PLRelation psi1 = psi_component(sys, 1);
  auto orbits = enumerate_orbits(psi1, 3, Rat(1, 8));
  for (const auto& orb : orbits.orbits) {
    try {
      lift_orbit(sys, 1, orb, 4);
    } catch (const LiftError& e) {
      rep.lift_error_level = e.level;
      rep.lift_message = e.what();
      break;
    }
  }
  return rep;
}

std::size_t projection_cardinality(const std::vector<TruncatedPoint>& pts, int i) {
  std::vector<Rat> vals;
  for (const auto& p : pts) {
    if (i < 0 || i > p.depth()) throw DepthError("projection index beyond point depth");
    vals.push_back(p.coords[i]);
  }
  std::sort(vals.begin(), vals.end());
  return std::unique(vals.begin(), vals.end()) - vals.begin();
}

}  // namespace plent
