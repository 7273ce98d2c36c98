#include "plent/rat.hpp"

#include <algorithm>
#include <cmath>

namespace plent {

Overlap intersect(const Interval& a, const Interval& b) {
  Overlap o;
  Rat lo = a.lo > b.lo ? a.lo : b.lo;
  Rat hi = a.hi < b.hi ? a.hi : b.hi;
  if (lo <= hi) {
    o.ok = true;
    o.iv = {lo, hi};
  }
  return o;
}

bool interiors_meet(const Interval& a, const Interval& b) {
  Rat lo = a.lo > b.lo ? a.lo : b.lo;
  Rat hi = a.hi < b.hi ? a.hi : b.hi;
  return lo < hi;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

Rat rat(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  std::string n = s.substr(0, slash);
  std::string d = slash == std::string::npos ? "1" : s.substr(slash + 1);
  mpz_class zn, zd;
  if (n.empty() || zn.set_str(n, 10) != 0) throw ParseError("bad numerator: " + s);
  if (d.empty() || zd.set_str(d, 10) != 0) throw ParseError("bad denominator: " + s);
  if (zd == 0) throw ParseError("zero denominator: " + s);
  Rat r(zn, zd);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(10); }

std::string to_string(const Interval& iv) {
  return "[" + to_string(iv.lo) + "," + to_string(iv.hi) + "]";
}

double log_int(const mpz_class& z) {
  if (z <= 0) throw DomainError("log of non-positive integer");
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

double log_rat(const Rat& r) {
  if (r <= 0) throw DomainError("log of non-positive rational");
  return log_int(r.get_num()) - log_int(r.get_den());
}

}  // namespace plent
