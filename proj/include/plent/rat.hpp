#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace plent {

using Rat = mpq_class;

struct Interval {
  Rat lo, hi;

  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool degenerate() const { return lo == hi; }
  Rat length() const { return hi - lo; }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
  bool operator<(const Interval& o) const {
    return lo < o.lo || (lo == o.lo && hi < o.hi);
  }
};

// Closed intersection; `ok` is false when empty.
struct Overlap {
  bool ok = false;
  Interval iv;
};
Overlap intersect(const Interval& a, const Interval& b);

// True when the open interiors meet.
bool interiors_meet(const Interval& a, const Interval& b);

// Union of closed intervals, sorted and merged.
std::vector<Interval> merge_intervals(std::vector<Interval> v);

Rat rat(long num, long den = 1);
Rat parse_rat(const std::string& s);
std::string to_string(const Rat& r);
std::string to_string(const Interval& iv);

// Natural log of a positive rational, robust to huge numerators.
double log_rat(const Rat& r);
double log_int(const mpz_class& z);

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct CompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HomeoError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace plent
