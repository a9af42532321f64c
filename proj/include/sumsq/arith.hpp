#pragma once

// Exact integer and modular arithmetic shared by every other module:
// factorization, valuations, extended gcd, CRT, modular square roots and
// explicit two-square representations.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sumsq::arith {

using BigInt = boost::multiprecision::cpp_int;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Canonical representative of a mod m in [0, m). Requires m > 0.
BigInt mod_floor(const BigInt& a, const BigInt& m);

/// Floor square root; throws InvalidArgument for negative input.
BigInt isqrt(const BigInt& n);
u64 isqrt(u64 n);

/// True iff n = r^2 for some integer r (stored in *root when given).
bool is_square(const BigInt& n, BigInt* root = nullptr);

/// Narrowing that throws InvalidArgument instead of truncating.
u64 to_u64(const BigInt& n, const char* what = "value");

std::string to_decimal(const BigInt& n);
BigInt from_decimal(const std::string& s);

// ---------------------------------------------------------------------------
// Factorization

/// An integer carried together with its complete prime factorization.
/// Zero is represented by an empty factor map plus a flag.
class FactoredInteger {
public:
    using FactorMap = std::map<BigInt, unsigned>;

    FactoredInteger() : value_(1) {}

    static FactoredInteger zero();
    static FactoredInteger one() { return {}; }

    /// Builds from a factor map whose keys the caller guarantees are prime.
    static FactoredInteger from_factors(FactorMap factors);

    const BigInt& value() const { return value_; }
    bool is_zero() const { return zero_; }
    const FactorMap& factors() const { return factors_; }

    /// Exponent of p (0 when p does not divide the value).
    unsigned exponent(const BigInt& p) const;

    FactoredInteger operator*(const FactoredInteger& rhs) const;
    bool operator==(const FactoredInteger& rhs) const = default;

    std::string to_string() const;

private:
    BigInt value_;
    FactorMap factors_;
    bool zero_ = false;
};

struct FactorBudget {
    u64 trial_bound = 1'000'000;
    u64 rho_iterations = 100'000;
    unsigned rho_attempts = 8;
};

/// Complete factorization by trial division, Miller-Rabin and Pollard-Brent
/// rho. Throws BudgetExceeded when a composite cofactor resists the rho budget.
FactoredInteger factorize(const BigInt& n, const FactorBudget& budget = {});

/// Miller-Rabin with fixed bases. Deterministic below 3.3e24; above that the
/// first 24 prime bases are used.
bool is_probable_prime(const BigInt& n);
bool is_probable_prime(u64 n);

/// Primes up to limit (inclusive), shared and cached across calls.
std::shared_ptr<const std::vector<std::uint32_t>> prime_table(std::uint32_t limit);

/// k with p^k || n. Requires n >= 1 and p >= 2.
unsigned valuation(const BigInt& n, const BigInt& p);
unsigned valuation(u64 n, u64 p);

// ---------------------------------------------------------------------------
// Linear congruences

struct ExtGcd {
    BigInt g;
    BigInt x;
    BigInt y;
};

/// g = gcd(a, b) > 0 with a*x + b*y = g. Throws DegenerateInput for (0, 0).
ExtGcd ext_gcd(const BigInt& a, const BigInt& b);

/// Inverse of a mod m; throws InvalidArgument when gcd(a, m) != 1.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

/// An element of Z/mZ, always stored as its representative in [0, m).
class ResidueClass {
public:
    ResidueClass() : value_(0), modulus_(1) {}
    ResidueClass(const BigInt& value, const BigInt& modulus);

    const BigInt& value() const { return value_; }
    const BigInt& modulus() const { return modulus_; }

    /// Reduction to a divisor d of the modulus.
    ResidueClass reduce(const BigInt& d) const;

    bool operator==(const ResidueClass&) const = default;

private:
    BigInt value_;
    BigInt modulus_;
};

/// Unique class modulo the product of pairwise coprime moduli. Throws
/// NonCoprimeModuli naming the first offending pair.
ResidueClass crt_combine(std::span<const ResidueClass> congruences);

/// All x mod p^e with x^2 = a (mod p^e), ascending. p must be prime and
/// p^e < 2^62.
std::vector<u64> sqrt_mod_prime_power(u64 a, u64 p, unsigned e);

// ---------------------------------------------------------------------------
// Sums of two squares

/// Every prime = 3 (mod 4) occurs to an even power. Zero counts as 0^2 + 0^2.
bool is_sum_two_squares(const FactoredInteger& n);

struct TwoSquares {
    BigInt x;
    BigInt y;
    bool operator==(const TwoSquares&) const = default;
    bool operator<(const TwoSquares& rhs) const { return x != rhs.x ? x < rhs.x : y < rhs.y; }
};

/// Canonical representation 0 <= x <= y with the smallest x, or nullopt when
/// n is not a sum of two squares.
std::optional<TwoSquares> represent_two_squares(const FactoredInteger& n);

/// All representations with 0 <= x <= y, ascending. Falls back to a single
/// representation when the Gaussian divisor count exceeds max_combinations.
std::vector<TwoSquares> all_two_square_reps(const FactoredInteger& n,
                                            std::size_t max_combinations = 1u << 16);

/// Sorts (|x|, |y|) into canonical order.
TwoSquares canonical_pair(const BigInt& x, const BigInt& y);

} // namespace sumsq::arith
