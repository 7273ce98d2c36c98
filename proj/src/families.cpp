#include "plent/families.hpp"

#include <sstream>

namespace plent {

PLMap tent(int n) {
  if (n < 2) throw DomainError("tent needs n >= 2");
  std::vector<Point> bp;
  for (int i = 0; i <= n; ++i) bp.push_back({rat(i, n), Rat(i % 2)});
  return PLMap(std::move(bp));
}

PLMap shifted_fold(int p) {
  if (p < 3 || p % 2 == 0) throw DomainError("shifted fold needs odd p >= 3");
  return PLMap({{0, 0}, {rat(p - 1, 2 * p), 1}, {rat(p - 1, p), 0}, {1, 1}});
}

PLMap fold_partner(int p) {
  if (p < 3 || p % 2 == 0) throw DomainError("fold partner needs odd p >= 3");
  std::vector<Point> bp{{0, 0}, {rat(2, p), rat(p - 1, p)}};
  for (int k = 3; k <= p; ++k) bp.push_back({rat(k, p), k % 2 ? Rat(1) : rat(p - 1, p)});
  PLMap g(std::move(bp));
  if (!map_equals(compose(shifted_fold(p), g), tent(p)))
    throw ConstructionError("fold partner fails S_p o G_p = T_p for p=" + std::to_string(p));
  return g;
}

PLMap plateau_R() { return PLMap({{0, 0}, {rat(1, 3), rat(1, 2)}, {rat(2, 3), rat(1, 2)}, {1, 1}}); }

PLMap affine(const Rat& a, const Rat& b) {
  if (!(a < b) || a < 0 || b > 1) throw DomainError("affine needs 0 <= a < b <= 1");
  return PLMap({{0, a}, {1, b}});
}

namespace {

// a + (b-a) t applied to both coordinates.
PLMap rescale(const PLMap& w, const Rat& a, const Rat& b) {
  std::vector<Point> bp;
  Rat len = b - a;
  for (const auto& p : w.breakpoints()) bp.push_back({a + len * p.x, a + len * p.y});
  return PLMap(std::move(bp));
}

void require_unit(const PLMap& w, const char* what) {
  if (w.lo() != 0 || w.hi() != 1) throw DomainError(std::string(what) + " needs a map on [0,1]");
}

}  // namespace

PLMap middle_third_tilde(const PLMap& w) {
  require_unit(w, "tilde");
  if (w(0) != 0 || w(1) != 1)
    throw DomainError("tilde needs w(0)=0 and w(1)=1 for continuity");
  Rat a = rat(1, 3), b = rat(2, 3);
  return glue({identity_map({0, a}), rescale(w, a, b), identity_map({b, 1})});
}

Interval dyadic_block(int i) {
  if (i < 1) throw DomainError("dyadic block index starts at 1");
  mpz_class p1 = 1, p2 = 1;
  p1 <<= (i - 1);
  p2 <<= i;
  return {Rat(p1 - 1, p1), Rat(p2 - 1, p2)};
}

PLMap block_rescale(int i, const PLMap& f) {
  require_unit(f, "block rescale");
  Interval blk = dyadic_block(i);
  return rescale(f, blk.lo, blk.hi);
}

PLMap slope_map(const Rat& s) {
  if (s < 1) throw DomainError("slope map needs s >= 1");
  Rat half = rat(1, 2);
  Rat h = half / s;
  std::vector<Point> bp{{0, 0}};
  Rat x = 0;
  bool up = true;
  while (x + h < half) {
    x += h;
    bp.push_back({x, up ? half : Rat(0)});
    up = !up;
  }
  Rat rest = half - x;
  Rat y = up ? Rat(s * rest) : Rat(half - s * rest);
  bp.push_back({half, y});
  bp.push_back({1, 1});
  return PLMap(std::move(bp));
}

namespace {

int seq_at(const std::vector<int>& n_seq, int i) {
  if (i < 1 || i > static_cast<int>(n_seq.size()))
    throw DomainError("n_seq too short for level " + std::to_string(i));
  if (n_seq[i - 1] < 1) throw DomainError("n_seq entries must be positive");
  return n_seq[i - 1];
}

PLMap tail_identity(int k) {
  Interval blk = dyadic_block(k + 2);
  return identity_map({blk.hi, 1});
}

}  // namespace

AppendixPair appendix_pair(int k, const std::vector<int>& n_seq, const Rat& s) {
  if (k < 1) throw DomainError("appendix level starts at 1");
  int nk = 2 * seq_at(n_seq, k) + 1;
  std::vector<PLMap> g{block_rescale(1, slope_map(s))};
  for (int i = 1; i < k; ++i)
    g.push_back(block_rescale(i + 1, middle_third_tilde(fold_partner(2 * seq_at(n_seq, i) + 1))));
  g.push_back(block_rescale(k + 1, middle_third_tilde(tent(nk))));
  g.push_back(block_rescale(k + 2, plateau_R()));
  g.push_back(tail_identity(k));

  std::vector<PLMap> f{identity_map({0, dyadic_block(k).hi})};
  f.push_back(block_rescale(k + 1, middle_third_tilde(shifted_fold(nk))));
  f.push_back(block_rescale(k + 2, plateau_R()));
  f.push_back(tail_identity(k));
  return {glue(f), glue(g)};
}

bool appendix_compatible(int k, const std::vector<int>& n_seq, const Rat& s) {
  auto a = appendix_pair(k, n_seq, s);
  auto b = appendix_pair(k + 1, n_seq, s);
  return map_equals(compose(a.f, b.g), compose(a.g, b.f));
}

namespace {

int int_param(const FamilySpec& s, const std::string& key) {
  auto it = s.params.find(key);
  if (it == s.params.end()) throw ParseError(s.kind + " needs parameter " + key);
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ParseError("parameter " + key + " is not an integer: " + it->second);
  }
}

Rat rat_param(const FamilySpec& s, const std::string& key) {
  auto it = s.params.find(key);
  if (it == s.params.end()) throw ParseError(s.kind + " needs parameter " + key);
  return parse_rat(it->second);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

PLMap build(const FamilySpec& spec) {
  const auto& k = spec.kind;
  if (k == "tent") return tent(int_param(spec, "n"));
  if (k == "shifted_fold") return shifted_fold(int_param(spec, "p"));
  if (k == "fold_partner") return fold_partner(int_param(spec, "p"));
  if (k == "plateau_R") return plateau_R();
  if (k == "identity") return identity_map();
  if (k == "affine") return affine(rat_param(spec, "a"), rat_param(spec, "b"));
  if (k == "slope_map") return slope_map(rat_param(spec, "s"));
  if (k == "tilde" || k == "block_rescale") {
    if (!spec.inner) throw ParseError(k + " needs an inner spec");
    PLMap w = build(*spec.inner);
    return k == "tilde" ? middle_third_tilde(w) : block_rescale(int_param(spec, "i"), w);
  }
  if (k == "appendix_f" || k == "appendix_g") {
    auto pr = appendix_pair(int_param(spec, "k"), spec.seq, rat_param(spec, "s"));
    return k == "appendix_f" ? pr.f : pr.g;
  }
  throw ParseError("unknown family kind: " + k);
}

FamilySpec parse_family(const std::string& text) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  FamilySpec s;
  auto need = [&](bool ok) {
    if (!ok) throw ParseError("malformed family spec: " + text);
  };
  if (head == "tent") {
    s.kind = "tent";
    s.params["n"] = rest;
  } else if (head == "fold") {
    s.kind = "shifted_fold";
    s.params["p"] = rest;
  } else if (head == "partner") {
    s.kind = "fold_partner";
    s.params["p"] = rest;
  } else if (head == "R") {
    s.kind = "plateau_R";
  } else if (head == "id") {
    s.kind = "identity";
  } else if (head == "affine") {
    auto parts = split(rest, ':');
    need(parts.size() == 2);
    s.kind = "affine";
    s.params["a"] = parts[0];
    s.params["b"] = parts[1];
  } else if (head == "slope") {
    s.kind = "slope_map";
    s.params["s"] = rest;
  } else if (head == "tilde") {
    s.kind = "tilde";
    s.inner = std::make_shared<FamilySpec>(parse_family(rest));
  } else if (head == "block") {
    auto c = rest.find(':');
    need(c != std::string::npos);
    s.kind = "block_rescale";
    s.params["i"] = rest.substr(0, c);
    s.inner = std::make_shared<FamilySpec>(parse_family(rest.substr(c + 1)));
  } else if (head == "appf" || head == "appg") {
    auto parts = split(rest, ':');
    need(parts.size() == 3);
    s.kind = head == "appf" ? "appendix_f" : "appendix_g";
    s.params["k"] = parts[0];
    s.params["s"] = parts[1];
    for (const auto& n : split(parts[2], ',')) s.seq.push_back(std::stoi(n));
  } else {
    throw ParseError("unknown family: " + text);
  }
  if (s.params.count("n") || s.params.count("p")) need(!rest.empty());
  return s;
}

std::string describe(const FamilySpec& spec) {
  std::string out = spec.kind;
  for (const auto& [k, v] : spec.params) out += " " + k + "=" + v;
  if (!spec.seq.empty()) {
    out += " seq=";
    for (std::size_t i = 0; i < spec.seq.size(); ++i)
      out += (i ? "," : "") + std::to_string(spec.seq[i]);
  }
  if (spec.inner) out += " (" + describe(*spec.inner) + ")";
  return out;
}

}  // namespace plent
