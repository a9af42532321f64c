#include "doctest.h"
#include "oracle.hpp"

#include "sumsq/arith.hpp"
#include "sumsq/error.hpp"
#include "sumsq/twosq_sieve.hpp"

#include <filesystem>
#include <random>
#include <sstream>

using namespace sumsq;
using namespace sumsq::twosq;

TEST_CASE("sieve_segment examples")
{
    CHECK(sieve_segment(0, 11).members() == std::vector<u64>{0, 1, 2, 4, 5, 8, 9, 10});
    CHECK_FALSE(sieve_segment(3, 4).contains(3));
    const auto s = sieve_segment(48, 51);
    CHECK(s.members() == std::vector<u64>{49, 50});
    CHECK_THROWS_AS(sieve_segment(5, 5), Error);
}

TEST_CASE("sieve matches brute force on [0, 1e5]")
{
    const auto seg = sieve_segment(0, 100'001);
    for (u64 n = 0; n <= 100'000; ++n) REQUIRE(seg.contains(n) == oracle::is_sum_two_squares(n));
}

TEST_CASE("sieve matches the factorization criterion at random points")
{
    std::mt19937_64 rng(2024);
    const auto seg = sieve_segment(0, 1'000'001);
    for (int i = 0; i < 10'000; ++i) {
        const u64 n = rng() % 1'000'001;
        REQUIRE(seg.contains(n) == arith::is_sum_two_squares(arith::factorize(n)));
    }
    const u64 lo = 1'000'000'000'000ull;
    const auto far = sieve_segment(lo, lo + 100'000);
    for (int i = 0; i < 300; ++i) {
        const u64 n = lo + rng() % 100'000;
        REQUIRE(far.contains(n) == arith::is_sum_two_squares(arith::factorize(n)));
    }
}

TEST_CASE("stitching adjacent segments")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        u64 a = rng() % 200'000, b = a + 1 + rng() % 5000, c = b + 1 + rng() % 5000;
        REQUIRE(sieve_segment(a, b).concat(sieve_segment(b, c)) == sieve_segment(a, c));
    }
}

TEST_CASE("segment cap")
{
    SieveOptions o;
    o.max_segment_length = 1000;
    try {
        sieve_segment(0, 1001, o);
        FAIL("expected SegmentTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SegmentTooLarge);
    }
}

TEST_CASE("bitmap dump round trip and cache")
{
    const auto seg = sieve_segment(1000, 1300);
    std::stringstream ss;
    seg.write(ss);
    CHECK(ss.str().size() == 16 + 8 * seg.words().size());
    CHECK(TwoSqSegment::read(ss) == seg);

    const auto dir = std::filesystem::temp_directory_path() / "sumsq_test_cache";
    std::filesystem::remove_all(dir);
    SieveOptions o;
    o.cache_dir = dir.string();
    CHECK(load_or_sieve(1000, 1300, o) == seg);
    CHECK(std::filesystem::exists(dir / "twosq_1000_1300.bin"));
    CHECK(load_or_sieve(1000, 1300, o) == seg);
    std::filesystem::remove_all(dir);
}

TEST_CASE("stream_E and count_N examples")
{
    std::vector<std::pair<u64, u64>> got;
    stream_E(10, [&](Term t) { got.emplace_back(t.index, t.value); });
    CHECK(got == std::vector<std::pair<u64, u64>>{{1, 0}, {2, 1}, {3, 2}, {4, 4}, {5, 5}, {6, 8}, {7, 9}, {8, 10}});
    got.clear();
    stream_E(0, [&](Term t) { got.emplace_back(t.index, t.value); });
    CHECK(got == std::vector<std::pair<u64, u64>>{{1, 0}});
    CHECK(count_N(10) == 8);
    CHECK(count_N(0) == 1);
    CHECK(count_N(2) == 3);
}

TEST_CASE("stream order and count do not depend on segmentation or workers")
{
    SieveOptions small;
    small.segment_length = 777;
    SieveOptions par = small;
    par.workers = 4;
    std::vector<u64> a, b, c;
    stream_E(200'000, [&](Term t) { a.push_back(t.value); });
    stream_E(200'000, [&](Term t) { b.push_back(t.value); }, small);
    stream_E(200'000, [&](Term t) { c.push_back(t.value); }, par);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(count_N(200'000) == a.size());
    CHECK(count_N(200'000, par) == a.size());
}

TEST_CASE("count_N is monotone with unit steps")
{
    SieveOptions o;
    o.segment_length = 1 << 12;
    u64 prev = count_N(0, o);
    for (u64 x = 1; x <= 3000; ++x) {
        const u64 cur = count_N(x, o);
        REQUIRE(cur >= prev);
        REQUIRE(cur - prev <= 1);
        REQUIRE((cur - prev == 1) == oracle::is_sum_two_squares(x));
        prev = cur;
    }
}
