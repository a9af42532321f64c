#pragma once

// Counts of residue patterns along runs of consecutive sums of two squares:
// N(x; q, a) = #{n : E_n <= x and E_{n+i-1} = a_i (mod q), 1 <= i <= r}.

#include "sumsq/arith.hpp"
#include "sumsq/twosq_sieve.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sumsq::census {

using arith::FactoredInteger;
using arith::u64;

struct PatternSpec {
    FactoredInteger q;
    std::vector<u64> classes;  // residues in [0, q)

    /// Validates r >= 1 and reduces nothing: residues must already lie in [0, q).
    static PatternSpec make(const FactoredInteger& q, std::vector<u64> classes);

    u64 modulus() const;
    std::size_t r() const { return classes.size(); }
};

struct Occurrence {
    u64 index;                // n, 1-based
    std::vector<u64> values;  // E_n, ..., E_{n+r-1}
};

struct CensusOptions {
    twosq::SieveOptions sieve;
    std::size_t max_occurrences = 10;  // stored per pattern
    u64 max_patterns = u64{1} << 24;
};

struct MatchResult {
    u64 count = 0;
    std::vector<Occurrence> occurrences;
};

/// Direct scan for one pattern. Windows starting at E_n <= x count even when
/// later members exceed x.
MatchResult match_pattern(const PatternSpec& spec, u64 x, const CensusOptions& options = {});

struct PatternCount {
    std::vector<u64> pattern;
    u64 count = 0;
    std::vector<Occurrence> occurrences;
};

struct CensusReport {
    u64 q = 1;
    std::size_t r = 1;
    u64 x = 0;
    u64 total_windows = 0;
    /// Every r-tuple of admissible classes, lexicographic by class values.
    std::vector<PatternCount> counts;

    /// Entry for a pattern; nullptr when the pattern has a non-admissible class
    /// (its count is zero by construction of E).
    const PatternCount* find(const std::vector<u64>& pattern) const;
    u64 count_of(const std::vector<u64>& pattern) const;
};

/// One pass over E up to x (plus lookahead to complete the last windows).
/// Throws TooManyPatterns when A(q)^r exceeds options.max_patterns and
/// InternalInconsistency if E produces a non-admissible residue.
CensusReport census_report(const FactoredInteger& q, std::size_t r, u64 x, const CensusOptions& options = {});

/// Smallest n with E_n <= bound whose window matches. Patterns containing a
/// non-admissible class return nullopt without scanning.
std::optional<Occurrence> find_first_occurrence(const PatternSpec& spec, u64 bound,
                                                const CensusOptions& options = {});

} // namespace sumsq::census
