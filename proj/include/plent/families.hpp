#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "plent/plmap.hpp"

namespace plent {

PLMap tent(int n);
PLMap shifted_fold(int p);
PLMap fold_partner(int p);
PLMap plateau_R();
PLMap affine(const Rat& a, const Rat& b);
// Identity outside [1/3,2/3], an affine copy of w inside.
PLMap middle_third_tilde(const PLMap& w);
// Dyadic block [(2^(i-1)-1)/2^(i-1), (2^i-1)/2^i].
Interval dyadic_block(int i);
// Copy of f on dyadic_block(i); the result's domain is that block.
PLMap block_rescale(int i, const PLMap& f);
PLMap slope_map(const Rat& s);

struct AppendixPair {
  PLMap f, g;
};
// Block-assembled pair for level k >= 1; n_seq is 1-indexed by level.
AppendixPair appendix_pair(int k, const std::vector<int>& n_seq, const Rat& s);
// f_k o g_{k+1} == g_k o f_{k+1}
bool appendix_compatible(int k, const std::vector<int>& n_seq, const Rat& s);

// {"kind": ..., "params": {...}} as a flat description.
struct FamilySpec {
  std::string kind;
  std::map<std::string, std::string> params;
  std::vector<int> seq;
  std::shared_ptr<FamilySpec> inner;
};

PLMap build(const FamilySpec& spec);
// Short forms: tent:3, fold:5, partner:5, R, affine:1/3:2/3, slope:3/2, id,
// tilde:<spec>, block:<i>:<spec>, appf:<k>:<s>:<n1,n2,..>, appg:<k>:<s>:<n1,..>.
FamilySpec parse_family(const std::string& text);
std::string describe(const FamilySpec& spec);

}  // namespace plent
