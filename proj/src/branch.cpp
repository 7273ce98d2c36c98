#include "plent/branch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plent {

namespace {

void dedup(BranchFamily& fam) {
  std::vector<std::size_t> idx(fam.arcs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return fam.arcs[a] < fam.arcs[b]; });
  std::vector<Arc> arcs;
  std::vector<std::pair<int, int>> prov;
  arcs.reserve(idx.size());
  prov.reserve(idx.size());
  for (std::size_t i : idx) {
    if (!arcs.empty() && arcs.back() == fam.arcs[i]) continue;
    arcs.push_back(std::move(fam.arcs[i]));
    prov.push_back(fam.provenance[i]);
  }
  fam.arcs = std::move(arcs);
  fam.provenance = std::move(prov);
}

}  // namespace

BranchFamily initial_branches(const PLRelation& r) {
  BranchFamily fam;
  fam.level = 1;
  for (const auto& a : r.arcs()) {
    if (a.kind != ArcKind::Mono) {
      ++fam.skipped;
      continue;
    }
    fam.arcs.push_back(a);
    fam.provenance.push_back({-1, -1});
  }
  // keep parameter order for M_1, only drop exact repeats
  std::vector<Arc> kept;
  std::vector<std::pair<int, int>> prov;
  for (std::size_t i = 0; i < fam.arcs.size(); ++i) {
    if (std::find(kept.begin(), kept.end(), fam.arcs[i]) != kept.end()) continue;
    kept.push_back(fam.arcs[i]);
    prov.push_back(fam.provenance[i]);
  }
  fam.arcs = std::move(kept);
  fam.provenance = std::move(prov);
  return fam;
}

BranchFamily initial_branches(const PLMap& f, const PLMap& g) {
  if (!is_open_onto(f) || !is_open_onto(g))
    throw DomainError("initial branches need open maps onto [0,1]");
  return initial_branches(param_graph(f, g));
}

ChainArc chain_arc(const Arc& a, const Arc& b) {
  ChainArc out;
  Interval z;
  {
    Interval ar = a.ran(), bd = b.dom();
    if (!interiors_meet(ar, bd)) return out;
    z = intersect(ar, bd).iv;
  }
  PLMap ainv = inverse(a.h);
  Rat x0 = ainv(z.lo), x1 = ainv(z.hi);
  Interval x = x0 < x1 ? Interval{x0, x1} : Interval{x1, x0};
  PLMap apart = x == a.h.domain() ? a.h : restrict_to(a.h, x);
  PLMap bpart = z == b.h.domain() ? b.h : restrict_to(b.h, z);
  out.arc = Arc::mono(compose(bpart, apart));
  out.ok = true;
  return out;
}

BranchFamily next_family(const BranchFamily& m1, const BranchFamily& mk, std::size_t cap) {
  if (m1.level != 1) throw DomainError("next_family needs M_1 as first argument");
  BranchFamily out;
  out.level = mk.level + 1;
  for (std::size_t i = 0; i < m1.arcs.size(); ++i) {
    Interval ar = m1.arcs[i].ran();
    for (std::size_t j = 0; j < mk.arcs.size(); ++j) {
      const Arc& b = mk.arcs[j];
      Interval bd = b.dom();
      if (!interiors_meet(ar, bd)) continue;
      auto c = chain_arc(m1.arcs[i], b);
      out.arcs.push_back(std::move(c.arc));
      out.provenance.push_back({static_cast<int>(i), static_cast<int>(j)});
      if (out.arcs.size() > cap) throw ResourceError("arc cap exceeded at level " +
                                                     std::to_string(out.level));
    }
  }
  dedup(out);
  return out;
}

namespace {

BranchCounts count_levels(const BranchFamily& m1, int n, int k_max, std::size_t cap) {
  BranchCounts bc;
  bc.n = n;
  double ln = std::log(static_cast<double>(n));
  BranchFamily mk = m1;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) {
      try {
        mk = next_family(m1, mk, cap);
      } catch (const ResourceError&) {
        bc.complete = false;
        break;
      }
    }
    BranchRow row;
    row.k = k;
    row.count = mk.arcs.size();
    row.log_growth = row.count ? std::log(static_cast<double>(row.count)) / k : 0.0;
    row.lower_bound = ln - std::log(2.0) / k;
    row.upper_bound = ln + std::log(static_cast<double>(k + 1)) / k;
    mpz_class bound = n;
    mpz_pow_ui(bound.get_mpz_t(), bound.get_mpz_t(), k);
    bound *= (k + 1);
    row.within_bound = mpz_class(static_cast<unsigned long>(row.count)) <= bound;
    bc.rows.push_back(row);
  }
  return bc;
}

}  // namespace

BranchCounts branch_counts(const PLMap& f, const PLMap& g, int k_max, std::size_t cap) {
  int n = static_cast<int>(std::max(lap_count(f), lap_count(g)));
  return count_levels(initial_branches(f, g), n, k_max, cap);
}

BranchCounts branch_counts(const PLRelation& r, int n, int k_max, std::size_t cap) {
  return count_levels(initial_branches(r), n, k_max, cap);
}

bool interleave_check(const PLMap& f, const PLMap& g) {
  auto th = critical_points(f);
  auto t = critical_points(g);
  std::size_t m = th.size() + 1, n = t.size() + 1;
  if (n <= m) throw DomainError("interleave_check needs more laps in g than in f");
  for (const auto& c : th)
    if (std::binary_search(t.begin(), t.end(), c)) return false;
  t.insert(t.begin(), g.lo());
  t.push_back(g.hi());
  for (std::size_t j = 1; j <= th.size(); ++j) {
    std::size_t i = (n * j) / m;
    if (i + 1 >= t.size()) return false;
    if (!(t[i] < th[j - 1] && th[j - 1] < t[i + 1])) return false;
  }
  return true;
}

std::size_t fiber_cardinality(const BranchFamily& mk, const Rat& z) {
  std::vector<Rat> ys;
  for (const auto& a : mk.arcs) {
    if (a.kind == ArcKind::Vertical && a.level == z)
      throw InfiniteFiber("interval fiber at " + to_string(z));
    if (a.dom().contains(z)) ys.push_back(a.kind == ArcKind::Mono ? a.h(z) : a.level);
  }
  std::sort(ys.begin(), ys.end());
  return std::unique(ys.begin(), ys.end()) - ys.begin();
}

}  // namespace plent
