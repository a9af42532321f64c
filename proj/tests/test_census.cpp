#include "doctest.h"

#include "sumsq/admissibility.hpp"
#include "sumsq/census.hpp"
#include "sumsq/error.hpp"
#include "sumsq/twosq_sieve.hpp"

#include <map>

using namespace sumsq;
using namespace sumsq::census;
using arith::factorize;

namespace {

// Counts of every q^r tuple (admissible or not) by a plain scan of the
// members of E, which are listed with lookahead to complete all windows.
std::map<std::vector<u64>, u64> brute_counts(u64 q, std::size_t r, u64 x)
{
    std::vector<u64> members;
    twosq::stream_E(x + 2000, [&](twosq::Term t) { members.push_back(t.value); });
    std::map<std::vector<u64>, u64> out;
    for (std::size_t i = 0; i + r <= members.size() && members[i] <= x; ++i) {
        std::vector<u64> key;
        for (std::size_t j = 0; j < r; ++j) key.push_back(members[i + j] % q);
        ++out[key];
    }
    return out;
}

} // namespace

TEST_CASE("match_pattern examples")
{
    const auto r1 = match_pattern(PatternSpec::make(factorize(4), {1}), 10);
    CHECK(r1.count == 3);
    REQUIRE(r1.occurrences.size() == 3);
    CHECK(r1.occurrences[0].values == std::vector<u64>{1});
    CHECK(r1.occurrences[1].values == std::vector<u64>{5});
    CHECK(r1.occurrences[2].values == std::vector<u64>{9});

    const auto r2 = match_pattern(PatternSpec::make(factorize(4), {1, 2}), 10);
    CHECK(r2.count == 2);
    REQUIRE(r2.occurrences.size() == 2);
    CHECK(r2.occurrences[0].values == std::vector<u64>{1, 2});
    CHECK(r2.occurrences[1].values == std::vector<u64>{9, 10});

    CHECK(match_pattern(PatternSpec::make(factorize(4), {3}), 100'000).count == 0);
    CHECK_THROWS_AS(PatternSpec::make(factorize(4), {}), Error);
    CHECK_THROWS_AS(PatternSpec::make(factorize(4), {4}), Error);
}

TEST_CASE("census_report examples")
{
    const auto rep = census_report(factorize(4), 1, 10);
    CHECK(rep.total_windows == 8);
    REQUIRE(rep.counts.size() == 3);
    CHECK(rep.count_of({0}) == 3);
    CHECK(rep.count_of({1}) == 3);
    CHECK(rep.count_of({2}) == 2);

    const auto one = census_report(factorize(1), 3, 10);
    REQUIRE(one.counts.size() == 1);
    CHECK(one.counts[0].pattern == std::vector<u64>{0, 0, 0});
    CHECK(one.counts[0].count == 8);

    const auto pairs = census_report(factorize(4), 2, 10);
    CHECK(pairs.total_windows == 8);
    CHECK(pairs.count_of({1, 2}) == 2);
    CHECK(pairs.find({3, 1}) == nullptr);
}

TEST_CASE("lexicographic order of report rows")
{
    const auto rep = census_report(factorize(6), 2, 1000);
    for (std::size_t i = 1; i < rep.counts.size(); ++i) REQUIRE(rep.counts[i - 1].pattern < rep.counts[i].pattern);
}

TEST_CASE("partition identity, zero on inadmissible, and agreement with a direct scan")
{
    const u64 x = 200'000;
    const u64 n_x = twosq::count_N(x);
    for (u64 q : {1, 3, 4, 5, 8, 9, 12}) {
        for (std::size_t r : {1, 2, 3}) {
            const auto qf = factorize(q);
            const auto rep = census_report(qf, r, x);
            u64 sum = 0;
            for (const auto& pc : rep.counts) sum += pc.count;
            REQUIRE(sum == n_x);
            REQUIRE(rep.total_windows == n_x);

            const auto brute = brute_counts(q, r, x);
            for (const auto& [pattern, count] : brute) {
                bool all_admissible = true;
                for (u64 a : pattern) all_admissible = all_admissible && admissibility::admissible(a, qf);
                REQUIRE(all_admissible);  // E never lands in a non-admissible class
                REQUIRE(rep.count_of(pattern) == count);
            }
            for (const auto& pc : rep.counts) {
                const auto it = brute.find(pc.pattern);
                REQUIRE(pc.count == (it == brute.end() ? 0 : it->second));
            }
        }
    }
}

TEST_CASE("census agrees with match_pattern")
{
    const auto qf = factorize(5);
    CensusOptions opts;
    opts.max_occurrences = 3;
    const auto rep = census_report(qf, 2, 50'000, opts);
    for (const auto& pc : rep.counts) {
        const auto m = match_pattern(PatternSpec::make(qf, pc.pattern), 50'000, opts);
        REQUIRE(m.count == pc.count);
        REQUIRE(m.occurrences.size() == pc.occurrences.size());
        for (std::size_t i = 0; i < m.occurrences.size(); ++i) {
            REQUIRE(m.occurrences[i].index == pc.occurrences[i].index);
            REQUIRE(m.occurrences[i].values == pc.occurrences[i].values);
        }
    }
}

TEST_CASE("shard determinism")
{
    CensusOptions whole, sharded, parallel;
    sharded.sieve.segment_length = 1000;
    parallel.sieve.segment_length = 4096;
    parallel.sieve.workers = 4;
    const auto a = census_report(factorize(5), 3, 300'000, whole);
    const auto b = census_report(factorize(5), 3, 300'000, sharded);
    const auto c = census_report(factorize(5), 3, 300'000, parallel);
    REQUIRE(a.counts.size() == b.counts.size());
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        REQUIRE(a.counts[i].count == b.counts[i].count);
        REQUIRE(a.counts[i].count == c.counts[i].count);
    }
}

TEST_CASE("too many patterns")
{
    CensusOptions opts;
    opts.max_patterns = 100;
    try {
        census_report(factorize(5), 3, 10, opts);
        FAIL("expected TooManyPatterns");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooManyPatterns);
    }
}

TEST_CASE("find_first_occurrence examples")
{
    const auto occ = find_first_occurrence(PatternSpec::make(factorize(4), {1, 2, 0}), 100);
    REQUIRE(occ.has_value());
    CHECK(occ->index == 2);
    CHECK(occ->values == std::vector<u64>{1, 2, 4});
    CHECK_FALSE(find_first_occurrence(PatternSpec::make(factorize(4), {0, 3}), 1'000'000).has_value());
    const auto zero = find_first_occurrence(PatternSpec::make(factorize(1), {0}), 0);
    REQUIRE(zero.has_value());
    CHECK(zero->index == 1);
    CHECK(zero->values == std::vector<u64>{0});
    CHECK_FALSE(find_first_occurrence(PatternSpec::make(factorize(5), {0, 0, 0}), 6000).has_value());
    CHECK(find_first_occurrence(PatternSpec::make(factorize(5), {0, 0, 0}), 6005)->values ==
          std::vector<u64>{6005, 6010, 6025});
}
