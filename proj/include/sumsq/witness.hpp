#pragma once

// Explicit families n(t) = x(t)^2 + y(t)^2 = a (mod q) with n(t) + h also a
// sum of two squares by construction, so that n(t) + k is the only member of
// the triple left to chance. F(t) = n(t) + k = A t^2 + B t + (C + k).

#include "sumsq/arith.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sumsq::witness {

using arith::BigInt;
using arith::FactoredInteger;
using arith::FactorBudget;
using arith::ResidueClass;
using arith::TwoSquares;
using arith::u64;

struct HypothesisVerdict {
    bool pass = true;
    std::string clause;  // first violated clause, empty on pass
    std::string detail;
};

/// q: nu_p(q) even for p = 3 (mod 4); nu_2(q) even and at least 2; a, a+h,
/// a+k admissible mod q; none of them = 0 (mod 2^(nu_2 - 1)).
HypothesisVerdict check_hypotheses(const FactoredInteger& q, const BigInt& a, const BigInt& h, const BigInt& k);

struct BaseSolution {
    BigInt x0, y0;
    ResidueClass a;
    FactoredInteger q;
    std::map<BigInt, unsigned> per_prime_valuations;  // p | q -> nu_p(gcd(x0, y0))
};

struct ShiftPair {
    BigInt u, v;
    BigInt gcd_uv;
};

struct SearchLimits {
    u64 base_candidates = 1u << 22;   // per prime power
    u64 shift_candidates = 1u << 22;  // per prime power
};

/// Smallest local solutions of x0^2 + y0^2 = a with the valuation pattern
/// required at each prime of q, CRT-combined. Requires nu_p(q) even for
/// p = 3 (mod 4) and nu_2(q) != 1.
BaseSolution solve_base(const BigInt& a, const FactoredInteger& q, const SearchLimits& limits = {});

/// (u, v) with (x0+u)^2 + (y0+v)^2 = a+h (mod q) and gcd(u, v) restricted so
/// that the family below has integral step and n(t) = a (mod q).
ShiftPair construct_shift(const BaseSolution& base, const BigInt& h, const SearchLimits& limits = {});

struct WitnessFamily {
    FactoredInteger q;
    BigInt a, h, k;
    BigInt x0, y0, u, v, g;
    BigInt T, r0, s0;
    BigInt X0, X1, Y0, Y1;  // x(t) = X0 + X1 t, y(t) = Y0 + Y1 t
    BigInt A, B, C;         // n(t) = A t^2 + B t + C
    BigInt eta;             // B^2 - 4AC = -eta^2

    BigInt x_at(const BigInt& t) const { return X0 + X1 * t; }
    BigInt y_at(const BigInt& t) const { return Y0 + Y1 * t; }
    BigInt n_at(const BigInt& t) const { return (A * t + B) * t + C; }
    BigInt F_at(const BigInt& t) const { return n_at(t) + k; }
    BigInt disc() const { return B * B - 4 * A * (C + k); }
};

/// Requires nu_2(q) >= 2. Every invariant is checked before returning;
/// failure raises InternalInconsistency.
WitnessFamily build_family(const BaseSolution& base, const ShiftPair& shift, const BigInt& h, const BigInt& k);

/// check_hypotheses, solve_base, construct_shift and build_family in one go.
/// When the first base admits no valid shift at some prime, later local base
/// candidates at that prime are tried. Throws HypothesisViolation on a
/// failed hypothesis.
WitnessFamily make_family(const FactoredInteger& q, const BigInt& a, const BigInt& h, const BigInt& k,
                          const SearchLimits& limits = {});

/// Re-checks every family identity independently of construction.
bool verify_family(const WitnessFamily& f, std::string* why = nullptr);

struct ObstructionCheck {
    std::string description;
    bool ok;
};

struct ObstructionReport {
    std::vector<ObstructionCheck> checks;
    BigInt disc;
    bool disc_is_negative_square = false;  // then F(t) is always a sum of two squares
    bool clean() const;
};

/// Local solvability checks for F(t). Throws ObstructionFound when one fails.
ObstructionReport check_local_obstructions(const WitnessFamily& f);

struct Exclusion {
    BigInt m;  // intermediate integer
    BigInt p;  // prime = 3 (mod 4) dividing m to the odd power e
    unsigned e;
};

struct TripleCertificate {
    BigInt n, q, a, h, k;
    std::optional<BigInt> t;
    TwoSquares reps[3];  // n, n+h, n+k
    bool consecutive = false;
    std::vector<Exclusion> evidence;  // one per integer strictly inside the triple, when consecutive
};

/// Independent check using only squaring, reduction and primality tests.
bool verify_certificate(const TripleCertificate& c, std::string* why = nullptr);

struct ScanOptions {
    FactorBudget budget{1'000'000, 100'000, 8};
    unsigned workers = 1;
    bool check_consecutive = true;
    u64 max_gap = 4096;  // skip the consecutiveness check beyond this span
};

struct ScanResult {
    std::vector<TripleCertificate> certificates;  // ascending t
    u64 scanned = 0;
    u64 skipped = 0;  // F(t) not factored within budget
};

ScanResult scan_family(const WitnessFamily& f, u64 t_max, const ScanOptions& options = {});

/// Smallest t <= t_max giving a certificate.
std::optional<TripleCertificate> first_certificate(const WitnessFamily& f, u64 t_max,
                                                   const ScanOptions& options = {});

/// Fills consecutive/evidence for a certificate whose reps are already set.
void attach_consecutive_evidence(TripleCertificate& c, const ScanOptions& options);

} // namespace sumsq::witness
