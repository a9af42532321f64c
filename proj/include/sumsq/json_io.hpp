#pragma once

// Machine-readable output. Integers go out as decimal strings so that values
// beyond 64 bits survive any JSON reader.

#include "sumsq/census.hpp"
#include "sumsq/forcing.hpp"
#include "sumsq/witness.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sumsq::io {

using json = nlohmann::ordered_json;

/// "[1,2]"
std::string pattern_string(const std::vector<arith::u64>& pattern);

/// Header `pattern,count`, one row per pattern, e.g. `"[1,2]",2`.
void write_census_csv(std::ostream& out, const census::CensusReport& report);
/// Header `pattern,n,E_n,E_n+1,...`, one row per pattern with its first
/// occurrence, or `none`. Needs a report built with max_occurrences >= 1.
void write_first_occurrences_csv(std::ostream& out, const census::CensusReport& report);
void write_match_csv(std::ostream& out, const census::PatternSpec& spec, const census::MatchResult& result);

json to_json(const census::Occurrence& occ);
json to_json(const census::CensusReport& report, bool with_occurrences);
json to_json(const witness::TripleCertificate& cert);
json to_json(const witness::WitnessFamily& family);
json to_json(const witness::ObstructionReport& report);
json to_json(const forcing::BlockingSystem& system);
json to_json(const forcing::TupleDesign& design);
json to_json(const forcing::GapBlocking& gb);
json to_json(const arith::FactoredInteger& n);
json checks_to_json(const std::vector<std::pair<std::string, bool>>& checks);

/// Parses one certificate line. Throws InvalidArgument on malformed input.
witness::TripleCertificate certificate_from_json(const json& j);

} // namespace sumsq::io
