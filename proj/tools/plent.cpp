// plent: batch driver for the entropy experiments.
#include <algorithm>
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "plent/serialize.hpp"

using namespace plent;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string out = ".";
  std::size_t cap_breakpoints = kDefaultBreakpointCap;
  std::size_t cap_orbits = kDefaultOrbitCap;
};

struct Failures {
  std::string command;
  std::vector<std::string> items;
  Json witness;
  void add(const std::string& s) { items.push_back(s); }
};

void write_file(const Common& c, const std::string& name, const std::string& body) {
  fs::create_directories(c.out);
  std::ofstream os(fs::path(c.out) / name);
  if (!os) throw ResourceError("cannot write " + (fs::path(c.out) / name).string());
  os << body;
}

void write_json(const Common& c, const std::string& name, const Json& j) {
  write_file(c, name, j.dump(2) + "\n");
}

template <class T>
void write_csv_file(const Common& c, const std::string& name, const T& t) {
  std::ostringstream os;
  write_csv(os, t);
  write_file(c, name, os.str());
}

int finish(const Common& c, const Failures& f) {
  if (f.items.empty()) return 0;
  Json rep{{"command", f.command}, {"ok", false}, {"failures", f.items}};
  if (!f.witness.is_null()) rep["witness"] = f.witness;
  try {
    write_json(c, "failure.json", rep);
  } catch (const std::exception&) {
  }
  // witness stays in the file; stderr gets the short form
  Json brief{{"command", f.command}, {"ok", false}, {"failures", f.items},
             {"report", (fs::path(c.out) / "failure.json").string()}};
  std::cerr << brief.dump(2) << "\n";
  return 1;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rat(item).get_d());
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

// Relation built from map specs: graph of f, g o f^-1 (param), or f^-1 o g.
PLRelation relation_from(const std::string& form, const std::string& f, const std::string& g,
                         const std::string& file, int power, std::size_t cap) {
  PLRelation r;
  if (!file.empty()) {
    std::ifstream is(file);
    if (!is) throw ParseError("cannot read " + file);
    std::stringstream ss;
    ss << is.rdbuf();
    r = relation_from_json(parse_json(ss.str()));
  } else {
    PLMap fm = build(parse_family(f));
    if (form == "graph") {
      r = graph_of(fm);
    } else {
      PLMap gm = build(parse_family(g));
      if (form == "param")
        r = param_graph(fm, gm);
      else if (form == "preimage")
        r = compose_rel(inverse_rel(graph_of(fm)), graph_of(gm));
      else
        throw ParseError("unknown relation form '" + form + "'");
    }
  }
  PLRelation base = r;
  for (int k = 2; k <= power; ++k) {
    r = compose_rel(base, r);
    std::size_t pts = 0;
    for (const auto& a : r.arcs()) pts += a.kind == ArcKind::Mono ? a.h.breakpoints().size() : 2;
    if (pts > cap) throw ResourceError("breakpoint cap exceeded at power " + std::to_string(k));
  }
  return r;
}

// Config keys become flags placed before the real ones, so flags win.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) throw ParseError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  Json cfg = parse_json(ss.str());
  if (!cfg.is_object()) throw ParseError("config must be a JSON object");
  std::vector<std::string> extra;
  std::string command;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.key() == "command") {
      command = it->get<std::string>();
      continue;
    }
    const Json& v = *it;
    std::string flag = "--" + it.key();
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back(flag);
      continue;
    }
    std::string val;
    if (v.is_string())
      val = v.get<std::string>();
    else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i)
        val += (i ? "," : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
    } else
      val = v.dump();
    extra.push_back(flag);
    extra.push_back(val);
  }
  // the subcommand must come first; take it from argv when present
  std::vector<std::string> out;
  std::size_t start = 0;
  if (!args.empty() && args[0].rfind("-", 0) != 0) {
    out.push_back(args[0]);
    start = 1;
  } else if (!command.empty()) {
    out.push_back(command);
  }
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + start, args.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact entropy computations for PL interval maps, relations and inverse limits"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Common c;
  std::string config;
  auto common = [&](CLI::App* s) {
    s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    s->add_option("--out", c.out, "output directory");
    s->add_option("--cap-breakpoints", c.cap_breakpoints, "breakpoint cap");
    s->add_option("--cap-orbits", c.cap_orbits, "orbit cap");
    s->add_option("--config", config, "JSON config; flags override");
  };

  // commute-check
  std::string f_spec = "tent:2", g_spec = "tent:3";
  auto* cc = app.add_subcommand("commute-check", "strong commutation g o f^-1 = f^-1 o g");
  common(cc);
  cc->add_option("--f", f_spec);
  cc->add_option("--g", g_spec);

  // branches
  int kmax = 4;
  int dump_level = 0;
  auto* br = app.add_subcommand("branches", "consistent monotone arc counts |M_k|");
  common(br);
  br->add_option("--f", f_spec);
  br->add_option("--g", g_spec);
  br->add_option("--kmax", kmax);
  br->add_option("--dump-level", dump_level, "write M_k with provenance for this k");

  // horseshoe
  std::string form = "param", rel_file;
  int power = 1, want = 0;
  auto* hs = app.add_subcommand("horseshoe", "certified horseshoe search");
  common(hs);
  hs->add_option("--f", f_spec);
  hs->add_option("--g", g_spec);
  hs->add_option("--form", form, "graph | param (g o f^-1) | preimage (f^-1 o g)");
  hs->add_option("--relation", rel_file, "relation JSON instead of map specs");
  hs->add_option("--power", power);
  hs->add_option("--N", want, "required size, 0 for the largest found");

  // bracket
  int n = 3, m = 2;
  bool no_certs = false;
  auto* bk = app.add_subcommand("bracket", "horseshoe lower and branch upper bounds for tent pairs");
  common(bk);
  bk->add_option("--n", n);
  bk->add_option("--m", m);
  bk->add_option("--kmax", kmax);
  bk->add_flag("--no-certs", no_certs);

  // entropy-map
  int nmax = 8;
  auto* em = app.add_subcommand("entropy-map", "lap-growth entropy of a PL map");
  common(em);
  em->add_option("--f", f_spec);
  em->add_option("--nmax", nmax);

  // entropy-rel
  std::string eps_list = "1/8,1/16", grid = "1/64";
  std::size_t span_limit = 2000;
  auto* er = app.add_subcommand("entropy-rel", "separated/spanning estimates for a relation");
  common(er);
  er->add_option("--f", f_spec);
  er->add_option("--g", g_spec);
  er->add_option("--form", form);
  er->add_option("--relation", rel_file);
  er->add_option("--nmax", nmax);
  er->add_option("--eps", eps_list, "comma separated, rationals allowed");
  er->add_option("--grid", grid);
  er->add_option("--span-limit", span_limit);
  er->add_option("--kmax", kmax, "iterate horseshoe bound depth");

  // invlim
  std::string sys_kind = "shift", sys_file, nseq = "2,5,2,5", s_val = "2", psi_levels;
  int depth = 8;
  auto* il = app.add_subcommand("invlim", "diagonal map estimates on a truncated inverse limit");
  common(il);
  il->add_option("--system", sys_kind, "shift | constant | appendix");
  il->add_option("--system-file", sys_file, "DiagonalSystem JSON");
  il->add_option("--f", f_spec);
  il->add_option("--g", g_spec);
  il->add_option("--nseq", nseq);
  il->add_option("--s", s_val);
  il->add_option("--depth", depth);
  il->add_option("--nmax", nmax);
  il->add_option("--eps", eps_list);
  il->add_option("--grid", grid);
  il->add_option("--psi-levels", psi_levels, "comma separated levels for psi estimates");

  // appendix
  int kb = 6;
  auto* ap = app.add_subcommand("appendix", "blockwise bounds for the appendix family");
  common(ap);
  ap->add_option("--s", s_val);
  ap->add_option("--nseq", nseq);
  ap->add_option("--kmax", kmax);
  ap->add_option("--kb", kb, "branch depth per block");

  std::vector<std::string> args;
  try {
    args = merge_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << Json{{"ok", false}, {"failures", {e.what()}}}.dump(2) << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Failures fail;
  try {
    if (*cc) {
      fail.command = "commute-check";
      PLMap f = build(parse_family(f_spec)), g = build(parse_family(g_spec));
      auto rep = strong_commute_report(f, g);
      bool plain = commutes(f, g);
      Json j{{"f", to_json(parse_family(f_spec))},
             {"g", to_json(parse_family(g_spec))},
             {"commutes", plain},
             {"strongly_commutes", rep.equal},
             {"region", rep.region},
             {"g_finv", to_json(rep.left)},
             {"finv_g", to_json(rep.right)}};
      write_json(c, "commute.json", j);
      std::cout << "commutes " << plain << " strongly " << rep.equal << "\n";
      if (!rep.equal) {
        fail.add("g o f^-1 != f^-1 o g" + std::string(rep.region ? " (f^-1 o g has a 2D piece)" : ""));
        fail.witness = Json{{"g_finv", j["g_finv"]}, {"finv_g", j["finv_g"]}};
      }
    } else if (*br) {
      fail.command = "branches";
      PLMap f = build(parse_family(f_spec)), g = build(parse_family(g_spec));
      auto bc = branch_counts(f, g, kmax, c.cap_orbits);
      write_csv_file(c, "branches.csv", bc);
      write_json(c, "branches.json", to_json(bc));
      if (dump_level >= 1) {
        auto m1 = initial_branches(f, g);
        auto mk = m1;
        for (int k = 2; k <= dump_level; ++k) mk = next_family(m1, mk, c.cap_orbits);
        write_json(c, "M" + std::to_string(dump_level) + ".json", to_json(mk));
      }
      for (const auto& r : bc.rows) {
        std::cout << "k=" << r.k << " |M_k|=" << r.count << " " << r.log_growth << "\n";
        if (!r.within_bound) fail.add("|M_k| > (k+1) n^k at k=" + std::to_string(r.k));
      }
      if (!bc.complete) fail.add("arc cap stopped the recursion");
    } else if (*hs) {
      fail.command = "horseshoe";
      PLRelation r = relation_from(form, f_spec, g_spec, rel_file, power, c.cap_breakpoints);
      HorseshoeCert cert;
      if (want >= 2) {
        auto got = find_horseshoe(r, want);
        if (got) cert = *got;
      } else {
        cert = largest_horseshoe(r);
      }
      bool ok = cert.N >= 1 && verify_horseshoe(r, cert.intervals);
      Json j = to_json(cert);
      j["verified"] = ok;
      write_json(c, "horseshoe.json", j);
      std::cout << "N=" << cert.N << " verified " << ok << "\n";
      if (want >= 2 && cert.N < static_cast<std::size_t>(want))
        fail.add("no certified " + std::to_string(want) + "-horseshoe found");
      if (cert.N >= 1 && !ok) fail.add("certificate failed re-verification");
    } else if (*bk) {
      fail.command = "bracket";
      auto rep = bracket_theorem_main(n, m, kmax, !no_certs);
      write_json(c, "bracket.json", to_json(rep));
      write_csv_file(c, "bracket.csv", rep);
      for (std::size_t i = 0; i < rep.lower.size(); ++i)
        std::cout << "k=" << i + 1 << " lower " << rep.lower[i] << " upper " << rep.upper[i]
                  << " target " << rep.target << "\n";
      for (const auto& s : rep.failures) fail.add(s);
    } else if (*em) {
      fail.command = "entropy-map";
      PLMap f = build(parse_family(f_spec));
      LapGrowth lg;
      try {
        lg = entropy_lap_growth(f, nmax, c.cap_breakpoints);
      } catch (const LapGrowthExhausted& e) {
        lg = e.partial;
        fail.add(e.what());
      }
      write_json(c, "lap_growth.json", to_json(lg));
      std::ostringstream os;
      os << "n,laps,term\n";
      for (std::size_t i = 0; i < lg.laps.size(); ++i)
        os << i + 1 << ',' << lg.laps[i] << ',' << (i < lg.terms.size() ? lg.terms[i] : 0.0) << '\n';
      write_file(c, "lap_growth.csv", os.str());
      if (lg.constant_slope) std::cout << "constant slope " << to_string(lg.slope) << " entropy " << lg.exact << "\n";
      if (!lg.terms.empty()) std::cout << "last term " << lg.terms.back() << "\n";
    } else if (*er) {
      fail.command = "entropy-rel";
      PLRelation r = relation_from(form, f_spec, g_spec, rel_file, 1, c.cap_breakpoints);
      auto t = entropy_estimate(r, parse_doubles(eps_list), nmax, parse_rat(grid), c.cap_orbits, span_limit);
      write_csv_file(c, "estimates.csv", t);
      Json j{{"monotone_in_eps", t.monotone_in_eps}};
      if (kmax >= 1) j["horseshoe_bound"] = to_json(iterate_horseshoe_bound(r, kmax));
      write_json(c, "estimates.json", j);
      for (const auto& row : t.rows)
        std::cout << "n=" << row.n << " eps=" << row.eps << " s=" << row.s_count << " r=" << row.r_count
                  << " est=" << row.estimate << "\n";
      for (const auto& row : t.rows)
        if (row.r_count >= 0 && static_cast<std::size_t>(row.r_count) > row.s_count)
          fail.add("spanning count exceeds separated count at n=" + std::to_string(row.n));
    } else if (*il) {
      fail.command = "invlim";
      SystemSpec spec;
      if (!sys_file.empty()) {
        std::ifstream is(sys_file);
        if (!is) throw ParseError("cannot read " + sys_file);
        std::stringstream ss;
        ss << is.rdbuf();
        spec = system_from_json(parse_json(ss.str()));
      } else {
        spec.kind = sys_kind;
        spec.f = std::make_shared<FamilySpec>(parse_family(f_spec));
        spec.g = std::make_shared<FamilySpec>(parse_family(g_spec));
        spec.n_seq = parse_ints(nseq);
        spec.s = parse_rat(s_val);
      }
      DiagonalSystem sys = build_system(spec);
      auto compat = check_diagonal_compat(sys, depth + nmax);
      if (!compat) fail.add("compatibility fails at level " + std::to_string(compat.level));
      DiagonalEstimateOptions opt;
      if (!psi_levels.empty()) opt.psi_levels = parse_ints(psi_levels);
      opt.cap = c.cap_orbits;
      std::vector<DiagonalRow> rows;
      for (double e : parse_doubles(eps_list)) {
        auto part = entropy_estimate_diagonal(sys, depth, nmax, e, parse_rat(grid), opt);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      write_csv_file(c, "invlim.csv", rows);
      write_json(c, "system.json", to_json(spec));
      for (const auto& r : rows)
        std::cout << "level=" << r.level << " n=" << r.n << " eps=" << r.eps << " est=" << r.estimate
                  << " tail=" << r.tail_bound << "\n";
    } else if (*ap) {
      fail.command = "appendix";
      auto rep = appendix_report(parse_ints(nseq), parse_rat(s_val), kmax, kb);
      write_json(c, "appendix.json", to_json(rep));
      write_csv_file(c, "appendix.csv", rep);
      double log_s = std::log(rep.s.get_d());
      for (const auto& lv : rep.levels) {
        std::string at = " at k=" + std::to_string(lv.k);
        std::cout << "k=" << lv.k << " compatible " << lv.compatible << " lower " << lv.lower << " upper "
                  << lv.upper << " target " << lv.target << "\n";
        if (!lv.compatible) fail.add("compatibility fails" + at);
        if (lv.lower < std::log(static_cast<double>(lv.n_k)) - 1e-12) fail.add("horseshoe below log n_k" + at);
        if (lv.first_block_lower < log_s - 1e-12) fail.add("first block horseshoe below log s" + at);
        if (lv.upper > lv.target + std::log(lv.k_b + 1.0) / lv.k_b + 1e-12)
          fail.add("branch bound above target + log(k_b+1)/k_b" + at);
      }
      std::cout << "lift error level " << rep.lift_error_level << "\n";
    }
  } catch (const std::exception& e) {
    fail.add(e.what());
    finish(c, fail);
    return 2;
  }
  return finish(c, fail);
}
