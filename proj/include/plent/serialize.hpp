#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "plent/families.hpp"
#include "plent/invlim.hpp"

namespace plent {

using Json = nlohmann::ordered_json;

// Rationals travel as ["num", "den"] strings; decoding errors name the path.
Json to_json(const Rat& r);
Rat rat_from_json(const Json& j, const std::string& path = "$");
Json to_json(const Interval& iv);
Interval interval_from_json(const Json& j, const std::string& path = "$");

Json to_json(const PLMap& f);
PLMap plmap_from_json(const Json& j, const std::string& path = "$");

Json to_json(const Arc& a);
Arc arc_from_json(const Json& j, const std::string& path = "$");
Json to_json(const PLRelation& r);
PLRelation relation_from_json(const Json& j, const std::string& path = "$");

Json to_json(const BranchFamily& fam);
BranchFamily branch_family_from_json(const Json& j, const std::string& path = "$");
Json to_json(const BranchCounts& bc);

Json to_json(const HorseshoeCert& c);
HorseshoeCert cert_from_json(const Json& j, const std::string& path = "$");
Json to_json(const IterateBound& b);
Json to_json(const BracketReport& rep);

Json to_json(const FamilySpec& s);
FamilySpec family_from_json(const Json& j, const std::string& path = "$");

// Diagonal system description: constant (f, g), shift (f), appendix (n_seq, s).
struct SystemSpec {
  std::string kind;
  std::shared_ptr<FamilySpec> f, g;
  std::vector<int> n_seq;
  Rat s = 2;
};
Json to_json(const SystemSpec& s);
SystemSpec system_from_json(const Json& j, const std::string& path = "$");
DiagonalSystem build_system(const SystemSpec& s);

Json to_json(const TruncatedPoint& p);
TruncatedPoint point_from_json(const Json& j, const std::string& path = "$");

Json to_json(const AppendixReport& rep);
Json to_json(const LapGrowth& g);

// Parse text, turning syntax errors into ParseError with the byte offset.
Json parse_json(const std::string& text);

void write_csv(std::ostream& os, const EstimateTable& t);
void write_csv(std::ostream& os, const std::vector<DiagonalRow>& rows);
void write_csv(std::ostream& os, const BranchCounts& bc);
void write_csv(std::ostream& os, const BracketReport& rep);
void write_csv(std::ostream& os, const AppendixReport& rep);

}  // namespace plent
