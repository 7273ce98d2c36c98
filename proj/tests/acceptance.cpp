// One PASS/FAIL line per acceptance criterion, followed by indented details.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "plent/branch.hpp"
#include "plent/entropy.hpp"
#include "plent/families.hpp"
#include "plent/invlim.hpp"

using namespace plent;

namespace {

struct Check {
  std::ostringstream notes;
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << "    failed: " << what << '\n';
    }
  }
  void note(const std::string& s) { notes << "    " << s << '\n'; }
};

int failures = 0;

void run(int id, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < limit_s, "time limit " + std::to_string(limit_s) + " s");
  std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " ("
            << std::fixed << std::setprecision(2) << secs << " s)\n"
            << c.notes.str() << std::flush;
  if (!c.ok) ++failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

PLRelation g_finv(const PLMap& g, const PLMap& f) {
  return compose_rel(graph_of(g), inverse_rel(graph_of(f)));
}

mpz_class arc_bound(int n, int k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), n, k);
  return p * (k + 1);
}

void identities(Check& c) {
  for (int p : {3, 5, 7, 9})
    c.expect(map_equals(compose(shifted_fold(p), fold_partner(p)), tent(p)),
             "S_p o G_p = T_p, p=" + std::to_string(p));
  for (int p : {5, 7, 9})
    c.expect(rel_equals(g_finv(tent(p), shifted_fold(p)), rel_union(graph_of(tent((p - 1) / 2)), diagonal())),
             "T_p o S_p^-1 = T_(p-1)/2 u D, p=" + std::to_string(p));
  for (int n : {3, 5})
    c.expect(map_equals(compose(plateau_R(), middle_third_tilde(tent(n))), plateau_R()),
             "R o w~ = R for T_" + std::to_string(n));
  c.expect(map_equals(fold_partner(3), identity_map()), "fold_partner(3) = id");
}

void commutation(Check& c) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 5}})
    c.expect(strongly_commutes(tent(n), tent(m)),
             "strongly commute " + std::to_string(n) + "," + std::to_string(m));
  for (auto [n, m] : std::vector<std::pair<int, int>>{{4, 6}, {2, 4}, {3, 6}})
    c.expect(!strongly_commutes(tent(n), tent(m)),
             "do not strongly commute " + std::to_string(n) + "," + std::to_string(m));
  c.expect(rel_equals(g_finv(tent(6), tent(4)), g_finv(tent(3), tent(2))), "T_6 o T_4^-1 = T_3 o T_2^-1");
  c.expect(rel_equals(param_graph(tent(4), tent(6)), param_graph(tent(2), tent(3))),
           "same identity through the parametrized graph");
}

void branches(Check& c) {
  auto m1 = initial_branches(tent(2), tent(3));
  auto m2 = next_family(m1, m1);
  c.note("|M_1| = " + std::to_string(m1.arcs.size()) + ", |M_2| = " + std::to_string(m2.arcs.size()));
  c.expect(m1.arcs.size() == 4, "|M_1| = 4");
  c.expect(m2.arcs.size() == 14, "|M_2| = 14");
  if (m1.arcs.size() >= 3) {
    auto ab = chain_arc(m1.arcs[0], m1.arcs[1]);
    auto ca = chain_arc(m1.arcs[2], m1.arcs[0]);
    c.expect(ab.ok && ab.arc.dom() == Interval{rat(4, 9), rat(2, 3)} && ab.arc.ran() == Interval{rat(1, 2), 1},
             "C_1(A,B): [4/9,2/3] -> [1/2,1]");
    c.expect(ca.ok && ca.arc.dom() == Interval{rat(2, 3), 1} && ca.arc.ran() == Interval{0, rat(3, 4)},
             "C_1(C,A): [2/3,1] -> [0,3/4]");
  }
  for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 2}, {5, 3}}) {
    auto bc = branch_counts(tent(m), tent(n), 8);
    c.expect(bc.complete && bc.rows.size() == 8, "branch recursion completes for n=" + std::to_string(n));
    std::string counts;
    for (const auto& row : bc.rows) {
      counts += std::to_string(row.count) + " ";
      c.expect(mpz_class(static_cast<unsigned long>(row.count)) <= arc_bound(n, row.k),
               "|M_" + std::to_string(row.k) + "| <= (k+1) n^k for n=" + std::to_string(n));
    }
    c.note("(" + std::to_string(n) + "," + std::to_string(m) + ") |M_k|: " + counts);
  }
}

BracketReport bracket32;

void bracket(Check& c) {
  bracket32 = bracket_theorem_main(3, 2, 8);
  const auto& r = bracket32;
  for (const auto& f : r.failures) c.expect(false, f);
  c.expect(r.lower.size() == 8 && r.upper.size() == 8, "eight levels");
  if (r.lower.size() == 8 && r.upper.size() == 8) {
    c.note("(3,2) k=8: lower " + fmt(r.lower[7]) + ", upper " + fmt(r.upper[7]) + ", target " + fmt(r.target));
    // exact forms of the two thresholds: 2 N_8 >= 3^8 and |M_8| <= 9 * 3^8
    c.expect(2 * mpz_class(static_cast<unsigned long>(r.horseshoe_sizes[7])) >= mpz_class(6561),
             "lower(8) >= log 3 - log 2 / 8");
    c.expect(mpz_class(static_cast<unsigned long>(r.branch_counts[7])) <= arc_bound(3, 8),
             "upper(8) <= log 3 + log 9 / 8");
    c.expect(r.lower[7] >= std::log(3.0) - std::log(2.0) / 8 - 1e-12, "lower(8) numerically");
    c.expect(r.upper[7] <= std::log(3.0) + std::log(9.0) / 8 + 1e-12, "upper(8) numerically");
    for (int k = 0; k < 8; ++k) {
      c.expect(r.lower[k] <= r.target && r.target <= r.upper[k], "log 3 in bracket at k=" + std::to_string(k + 1));
      if (k) {
        c.expect(r.lower[k] >= r.lower[k - 1], "lower monotone at k=" + std::to_string(k + 1));
        c.expect(r.upper[k] <= r.upper[k - 1], "upper monotone at k=" + std::to_string(k + 1));
      }
    }
  }
  auto r5 = bracket_theorem_main(5, 3, 5, false);
  for (const auto& f : r5.failures) c.expect(false, "(5,3) " + f);
  if (r5.lower.size() == 5) {
    c.note("(5,3) k=5: lower " + fmt(r5.lower[4]) + ", upper " + fmt(r5.upper[4]));
    c.expect(r5.lower[4] <= std::log(5.0) && std::log(5.0) <= r5.upper[4], "log 5 in (5,3) bracket");
  } else {
    c.expect(false, "(5,3) bracket has five levels");
  }
}

void lap_growth(Check& c) {
  std::size_t laps = lap_count(iterate(tent(3), 6));
  double v = std::log(static_cast<double>(laps - 1)) / 6;
  c.note("lap_count(T_3^6) = " + std::to_string(laps) + ", estimate " + fmt(v));
  c.expect(std::abs(v - std::log(3.0)) < 1e-3, "within 1e-3 of log 3");
  for (Rat s : {rat(3, 2), Rat(2), Rat(3)}) {
    Rat got;
    bool fast = constant_slope_entropy(slope_map(s), got);
    c.expect(fast && got == s, "fast path slope " + to_string(s));
    auto lg = entropy_lap_growth(slope_map(s), 3);
    c.expect(lg.constant_slope && lg.slope == s && lg.exact == log_rat(s), "entropy = log " + to_string(s));
  }
}

void horseshoes(Check& c) {
  PLRelation r = compose_rel(inverse_rel(graph_of(tent(2))), graph_of(tent(2)));
  auto cert = find_horseshoe(r, 2);
  c.expect(cert.has_value(), "2-horseshoe found");
  if (cert) {
    c.expect(cert->intervals == std::vector<Interval>{{0, rat(1, 3)}, {rat(2, 3), 1}}, "{[0,1/3],[2/3,1]}");
    c.expect(verify_horseshoe(r, cert->intervals), "re-verification");
  }
  PLRelation gamma = param_graph(tent(2), tent(3));
  PLRelation cube = compose_rel(gamma, compose_rel(gamma, gamma));
  PLRelation direct = param_graph(iterate(tent(2), 3), iterate(tent(3), 3));
  c.expect(rel_equals(cube, direct), "cube of param_graph(T_2,T_3) by composition equals the parametrized cube");
  auto c14 = find_horseshoe(cube, 14);
  c.expect(c14.has_value() && c14->N == 14, "14-horseshoe on the cube");
  if (c14) {
    c.expect(verify_horseshoe(cube, c14->intervals), "re-verification on the composed cube");
    c.expect(verify_horseshoe(direct, c14->intervals), "re-verification on the parametrized cube");
  }
}

void invlim_estimates(Check& c) {
  DiagonalEstimateOptions opt;
  auto pick = [](const std::vector<DiagonalRow>& rows) {
    for (const auto& r : rows)
      if (r.level == -1 && r.n == 10) return r;
    return DiagonalRow{};
  };
  auto shift = pick(entropy_estimate_diagonal(shift_system(tent(2)), 8, 10, 1.0 / 16, rat(1, 256), opt));
  c.note("shift estimate " + fmt(shift.estimate) + " (count " + std::to_string(shift.count) + ", tail " +
         fmt(shift.tail_bound) + ")");
  c.expect(shift.n == 10, "shift row present");
  c.expect(shift.estimate >= std::log(2.0) - 0.2 && shift.estimate <= std::log(2.0) + 0.05,
           "shift estimate in [log 2 - 0.2, log 2 + 0.05]");
  auto diag = pick(entropy_estimate_diagonal(constant_system(tent(2), tent(3)), 8, 10, 1.0 / 16, rat(1, 256), opt));
  auto bc = branch_counts(tent(2), tent(3), 8);
  double upper = bc.rows.back().log_growth;
  c.note("(T_2,T_3) estimate " + fmt(diag.estimate) + ", branch upper bound " + fmt(upper));
  c.expect(diag.n == 10, "diagonal row present");
  c.expect(diag.estimate <= upper + 0.05, "diagonal estimate <= branch upper bound + 0.05");
}

void appendix(Check& c) {
  const int k_b = 6;
  auto rep = appendix_report({2, 5, 2, 5}, 2, 3, k_b);
  const double a = std::log(2.0);
  for (const auto& lv : rep.levels) {
    std::string k = std::to_string(lv.k);
    c.note("k=" + k + ": lower " + fmt(lv.lower) + ", first block " + fmt(lv.first_block_lower) + ", upper " +
           fmt(lv.upper) + ", target " + fmt(lv.target));
    c.expect(lv.compatible, "compatibility at k=" + k);
    c.expect(lv.lower >= std::log(static_cast<double>(lv.n_k)) - 1e-12, "lower >= log n_k at k=" + k);
    c.expect(lv.first_block_lower >= a - 1e-12, "first block lower >= log s at k=" + k);
    c.expect(lv.upper <= std::max(a, std::log(static_cast<double>(lv.n_k))) + std::log(k_b + 1.0) / k_b + 1e-12,
             "upper <= max(log s, log n_k) + log(k_b+1)/k_b at k=" + k);
  }
  c.expect(rep.levels.size() == 3, "three levels");
  c.note("lift: " + (rep.lift_error_level >= 0 ? rep.lift_message : std::string("no error")));
  c.expect(rep.lift_error_level >= 0, "lift_orbit rejects the system (lifting condition fails)");
}

void properties(Check& c) {
  // sandwich on every 4-point subset of the grid {0, 1/8, .., 1}
  std::size_t instances = 0;
  for (int a = 0; a <= 8; ++a)
    for (int b = a + 1; b <= 8; ++b)
      for (int d = b + 1; d <= 8; ++d)
        for (int e = d + 1; e <= 8; ++e) {
          std::vector<double> xs{a / 8.0, b / 8.0, d / 8.0, e / 8.0};
          DistanceFn dist = [&](std::size_t i, std::size_t j) { return std::abs(xs[i] - xs[j]); };
          for (double eps : {0.125, 0.25, 0.375, 0.5}) {
            auto s = separated_count(4, dist, eps), r = spanning_count(4, dist, eps),
                 r2 = spanning_count(4, dist, eps / 2);
            c.expect(s.exact && r.exact && r2.exact, "exact solvers on tiny sets");
            c.expect(r.count <= s.count && s.count <= r2.count, "r <= s <= r(eps/2)");
            ++instances;
          }
        }
  for (const auto& rel : {graph_of(tent(2)), param_graph(tent(2), tent(3))}) {
    auto os = enumerate_orbits(rel, 2, rat(1, 4));
    for (double eps : {0.5, 0.25, 0.125}) {
      auto s = separated_count(os, eps), r = spanning_count(os, eps), r2 = spanning_count(os, eps / 2);
      c.expect(s.exact && r.exact && r2.exact, "exact solvers on orbit sets");
      c.expect(r.count <= s.count && s.count <= r2.count, "orbit r <= s <= r(eps/2)");
      ++instances;
    }
  }
  c.note("sandwich instances: " + std::to_string(instances));

  // composition against chained fibers, 200 random points per relation
  std::size_t points = 0;
  for (int trial = 0; trial < 5; ++trial) {
    PLMap f = oracle::random_map(oracle::uniform(2, 4), 12), g = oracle::random_map(oracle::uniform(2, 4), 12);
    auto pre = compose_rel(inverse_rel(graph_of(g)), graph_of(f));
    auto post = compose_rel(graph_of(g), inverse_rel(graph_of(f)));
    for (const Rat& x : oracle::sample_points({}, 200)) {
      IntervalSet want;
      for (const auto& iv : oracle::brute_preimage(g, f(x)))
        if (oracle::moves_together(f, x, g, iv.lo)) want.push_back(iv);
      c.expect(oracle::normalize(evaluate_at(pre, x)) == oracle::normalize(want), "g^-1 o f fiber");
      IntervalSet want2;
      for (const auto& iv : oracle::brute_preimage(f, x)) want2.push_back(oracle::brute_image(g, iv));
      c.expect(oracle::normalize(evaluate_at(post, x)) == oracle::normalize(want2), "g o f^-1 fiber");
      points += 2;
    }
    c.expect(rel_equals(inverse_rel(inverse_rel(pre)), pre), "inverse involution");
    c.expect(rel_equals(inverse_rel(inverse_rel(post)), post), "inverse involution");
  }
  c.note("fiber comparisons: " + std::to_string(points));

  // separated orbit families of the shift keep their size under deep projection
  auto sys = shift_system(tent(2));
  const int depth = 8, n = 3;
  const Rat eps = rat(1, 16);
  std::vector<std::vector<TruncatedPoint>> family;
  auto orbit_dist = [](const std::vector<TruncatedPoint>& u, const std::vector<TruncatedPoint>& v) {
    Rat m = 0;
    for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, truncated_metric(u[k], v[k]).value);
    return m;
  };
  for (int a = 0; a <= 64; ++a) {
    std::vector<TruncatedPoint> orb{pull_back_point(sys, depth, rat(a, 64))};
    for (int k = 1; k < n; ++k) orb.push_back(apply_diagonal(sys, orb.back()));
    bool far = true;
    for (const auto& o : family) far = far && orbit_dist(o, orb) > eps;
    if (far) family.push_back(std::move(orb));
  }
  c.note("separated family size " + std::to_string(family.size()));
  c.expect(family.size() >= 4, "nontrivial separated family");
  for (int i = 4; i <= depth - n + 1; ++i) {  // 2^-i <= eps
    std::set<std::vector<Rat>> proj;
    for (const auto& o : family) {
      std::vector<Rat> key;
      for (const auto& p : o) key.push_back(p.coords[i]);
      proj.insert(key);
    }
    c.expect(proj.size() == family.size(), "|S| = |pi_i(S)| at i=" + std::to_string(i));
    std::vector<TruncatedPoint> firsts;
    for (const auto& o : family) firsts.push_back(o.front());
    c.expect(projection_cardinality(firsts, i) <= family.size(), "projection count bounded");
  }
}

}  // namespace

int main() {
  run(1, "exact identity suite", 10, identities);
  run(2, "strong commutation table", 10, commutation);
  run(3, "branch calculus", 60, branches);
  run(4, "bracketing (3,2) k=8 and (5,3) k=5", 300, bracket);
  run(5, "lap growth and constant slope", 30, lap_growth);
  run(6, "horseshoe certificates", 10, horseshoes);
  run(7, "inverse-limit estimate bands", 300, invlim_estimates);
  run(8, "appendix counterexample behaviour", 120, appendix);
  run(9, "sandwich and property suites", 60, properties);
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << '\n';
  return failures ? 1 : 0;
}
