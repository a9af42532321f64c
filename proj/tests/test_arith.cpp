#include "doctest.h"
#include "oracle.hpp"

#include "sumsq/arith.hpp"
#include "sumsq/error.hpp"

#include <random>

using namespace sumsq;
using namespace sumsq::arith;

namespace {

BigInt product_of(const FactoredInteger& f)
{
    BigInt v = 1;
    for (const auto& [p, e] : f.factors()) v *= boost::multiprecision::pow(p, e);
    return v;
}

BigInt next_prime(BigInt n)
{
    while (!is_probable_prime(n)) ++n;
    return n;
}

} // namespace

TEST_CASE("factorize: small examples")
{
    CHECK(factorize(1).factors().empty());
    CHECK(factorize(1).value() == 1);
    CHECK(factorize(45).factors() == FactoredInteger::FactorMap{{3, 2}, {5, 1}});
    CHECK(factorize(49).factors() == FactoredInteger::FactorMap{{7, 2}});
    CHECK(factorize(0).is_zero());
    CHECK_THROWS_AS(factorize(-5), Error);
}

TEST_CASE("factorize agrees with trial division up to 1e5")
{
    for (u64 n = 1; n <= 100'000; ++n) {
        const auto f = factorize(n);
        REQUIRE(product_of(f) == n);
        for (const auto& [p, e] : f.factors()) {
            REQUIRE(e >= 1);
            REQUIRE(oracle::is_prime(static_cast<u64>(p)));
        }
    }
}

TEST_CASE("factorize: large inputs past trial division")
{
    const BigInt p1 = next_prime(BigInt(1'000'000'007));
    // rho finds p2 after about sqrt(p2) steps; the larger p3 is left prime
    const BigInt p2 = next_prime(BigInt("1000000000039"));
    const BigInt p3 = next_prime(BigInt("123456789012345678901"));
    const BigInt n = p1 * p1 * p2 * p3 * 12;
    FactorBudget budget;
    budget.rho_iterations = 20'000'000;
    const auto f = factorize(n, budget);
    CHECK(product_of(f) == n);
    CHECK(f.exponent(p1) == 2);
    CHECK(f.exponent(p2) == 1);
    CHECK(f.exponent(p3) == 1);
    CHECK(f.exponent(2) == 2);
    CHECK(f.exponent(3) == 1);

    const BigInt m = next_prime(BigInt("4294967311")) * next_prime(BigInt("8589934609"));
    CHECK(factorize(m).factors().size() == 2);
}

TEST_CASE("factorize reports an exhausted budget")
{
    const BigInt a = next_prime(BigInt("100000000000000000000000000000"));
    const BigInt b = next_prime(BigInt("300000000000000000000000000000"));
    FactorBudget tiny;
    tiny.trial_bound = 1000;
    tiny.rho_iterations = 10;
    tiny.rho_attempts = 1;
    try {
        factorize(a * b, tiny);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExceeded);
    }
}

TEST_CASE("Miller-Rabin against trial division and known pseudoprimes")
{
    for (u64 n = 0; n < 50'000; ++n) REQUIRE(is_probable_prime(n) == oracle::is_prime(n));
    for (u64 n : {561ull, 41041ull, 3215031751ull, 3825123056546413051ull}) CHECK_FALSE(is_probable_prime(n));
    CHECK(is_probable_prime(u64{18446744073709551557ull}));
    CHECK(is_probable_prime(BigInt("170141183460469231731687303715884105727")));  // 2^127 - 1
    CHECK_FALSE(is_probable_prime(BigInt("170141183460469231731687303715884105729")));
}

TEST_CASE("valuation")
{
    CHECK(valuation(BigInt(45), BigInt(3)) == 2);
    CHECK(valuation(BigInt(45), BigInt(7)) == 0);
    CHECK(valuation(u64{8}, u64{2}) == 3);
    CHECK_THROWS_AS(valuation(BigInt(0), BigInt(2)), Error);
}

TEST_CASE("ext_gcd")
{
    auto r = ext_gcd(1, 1);
    CHECK(r.g == 1);
    CHECK(r.x == 0);
    CHECK(r.y == 1);
    r = ext_gcd(4, 6);
    CHECK(r.g == 2);
    CHECK(4 * r.x + 6 * r.y == 2);
    r = ext_gcd(0, 5);
    CHECK((r.g == 5 && r.x == 0 && r.y == 1));
    CHECK_THROWS_AS(ext_gcd(0, 0), Error);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const BigInt a = static_cast<long long>(rng() % 2'000'001) - 1'000'000;
        const BigInt b = static_cast<long long>(rng() % 2'000'001) - 1'000'000;
        if (a == 0 && b == 0) continue;
        const auto e = ext_gcd(a, b);
        REQUIRE(a * e.x + b * e.y == e.g);
        REQUIRE(e.g > 0);
        REQUIRE(a % e.g == 0);
        REQUIRE(b % e.g == 0);
    }
}

TEST_CASE("crt_combine")
{
    std::vector<ResidueClass> c1{{2, 3}, {3, 5}};
    CHECK(crt_combine(c1) == ResidueClass(8, 15));
    std::vector<ResidueClass> c2{{0, 1}};
    CHECK(crt_combine(c2) == ResidueClass(0, 1));
    std::vector<ResidueClass> c3{{1, 4}, {8, 9}};
    CHECK(crt_combine(c3) == ResidueClass(17, 36));
    std::vector<ResidueClass> bad{{1, 4}, {3, 6}};
    try {
        crt_combine(bad);
        FAIL("expected NonCoprimeModuli");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonCoprimeModuli);
    }

    std::mt19937_64 rng(11);
    const u64 moduli[] = {4, 9, 25, 7, 11, 13, 17, 19, 23, 29};
    for (int i = 0; i < 500; ++i) {
        std::vector<ResidueClass> cs;
        for (u64 m : moduli) {
            if (rng() % 2) cs.emplace_back(static_cast<long long>(rng() % 1000) - 500, m);
        }
        const auto r = crt_combine(cs);
        for (const auto& c : cs) REQUIRE(r.reduce(c.modulus()) == c);
    }
}

TEST_CASE("ResidueClass reduction")
{
    const ResidueClass r(-1, 12);
    CHECK(r.value() == 11);
    CHECK(r.reduce(4) == ResidueClass(3, 4));
    CHECK_THROWS_AS(r.reduce(5), Error);
}

TEST_CASE("sqrt_mod_prime_power matches exhaustive search")
{
    CHECK(sqrt_mod_prime_power(1, 5, 1) == std::vector<u64>{1, 4});
    CHECK(sqrt_mod_prime_power(2, 3, 1).empty());
    CHECK(sqrt_mod_prime_power(1, 2, 3) == std::vector<u64>{1, 3, 5, 7});
    for (u64 p : {2, 3, 5, 7, 11, 13, 17}) {
        u64 pe = p;
        for (unsigned e = 1; pe <= 3000; ++e, pe *= p) {
            for (u64 a = 0; a < pe; ++a) {
                std::vector<u64> expect;
                for (u64 x = 0; x < pe; ++x) {
                    if (x * x % pe == a) expect.push_back(x);
                }
                REQUIRE(sqrt_mod_prime_power(a, p, e) == expect);
            }
        }
    }
}

TEST_CASE("sums of two squares: examples")
{
    CHECK(is_sum_two_squares(factorize(45)));
    CHECK_FALSE(is_sum_two_squares(factorize(21)));
    CHECK(is_sum_two_squares(FactoredInteger::zero()));
    CHECK(represent_two_squares(factorize(25)) == TwoSquares{0, 5});
    CHECK(represent_two_squares(factorize(45)) == TwoSquares{3, 6});
    CHECK_FALSE(represent_two_squares(factorize(21)).has_value());
    CHECK(represent_two_squares(FactoredInteger::zero()) == TwoSquares{0, 0});
    CHECK(canonical_pair(-7, 3) == TwoSquares{3, 7});
}

TEST_CASE("sums of two squares agree with brute force up to 1e5")
{
    for (u64 n = 0; n <= 100'000; ++n) {
        const auto f = factorize(n);
        const bool in_e = oracle::is_sum_two_squares(n);
        REQUIRE(is_sum_two_squares(f) == in_e);
        const auto rep = represent_two_squares(f);
        REQUIRE(rep.has_value() == in_e);
        if (rep) {
            REQUIRE(rep->x * rep->x + rep->y * rep->y == n);
            REQUIRE(rep->x <= rep->y);
        }
    }
}

TEST_CASE("all representations match enumeration")
{
    for (u64 n = 1; n <= 20'000; ++n) {
        const auto expect = oracle::all_reps(n);
        const auto got = all_two_square_reps(factorize(n));
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].x == expect[i].first);
            REQUIRE(got[i].y == expect[i].second);
        }
        if (!expect.empty()) {
            const auto rep = represent_two_squares(factorize(n));
            REQUIRE(rep->x == expect.front().first);
        }
    }
}

TEST_CASE("representations of large sums of two squares")
{
    const BigInt p = [] {
        BigInt c("1000000000000000000000000000057");
        while (!(c % 4 == 1 && is_probable_prime(c))) ++c;
        return c;
    }();
    const BigInt n = p * 9 * 2 * 13 * 13;
    const auto rep = represent_two_squares(factorize(n));
    REQUIRE(rep.has_value());
    CHECK(rep->x * rep->x + rep->y * rep->y == n);
    for (const auto& r : all_two_square_reps(factorize(n))) CHECK(r.x * r.x + r.y * r.y == n);
}

TEST_CASE("decimal conversion")
{
    CHECK(from_decimal("-123") == -123);
    CHECK(to_decimal(BigInt("98765432109876543210")) == "98765432109876543210");
    CHECK_THROWS_AS(from_decimal("12a"), Error);
    CHECK_THROWS_AS(from_decimal(""), Error);
    CHECK_THROWS_AS(to_u64(BigInt(-1)), Error);
    CHECK(isqrt(BigInt("1000000000000000000000000")) == BigInt("1000000000000"));
    CHECK(isqrt(u64{18446744073709551615ull}) == 4294967295ull);
}
