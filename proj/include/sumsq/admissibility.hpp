#pragma once

// A class a mod q is admissible when x^2 + y^2 = a (mod q) is solvable.
// With (a, q) = prod p^f_p and q = prod p^e_p this holds exactly when
//   * f_p is even or f_p = e_p for every prime p = 3 (mod 4), and
//   * a / 2^f_2 is not 3 (mod 4) whenever e_2 - f_2 >= 2.

#include "sumsq/arith.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sumsq::admissibility {

using arith::BigInt;
using arith::FactoredInteger;
using arith::ResidueClass;
using arith::u64;

struct OddPrimeViolation {
    BigInt p;
    unsigned f_p;
    unsigned e_p;
};

struct TwoAdicViolation {
    unsigned e_2;
    unsigned f_2;
    unsigned quotient_mod4;
};

using Violation = std::variant<OddPrimeViolation, TwoAdicViolation>;

struct AdmissibilityVerdict {
    ResidueClass cls;
    bool admissible = true;
    std::optional<Violation> reason;  // present iff !admissible

    std::string describe() const;
};

/// Throws ModulusMismatch when a.modulus() != q.value().
AdmissibilityVerdict is_admissible(const ResidueClass& a, const FactoredInteger& q);

/// Reduces a mod q first.
bool admissible(const BigInt& a, const FactoredInteger& q);

/// All admissible a in [0, q), ascending. q must fit comfortably in memory.
std::vector<ResidueClass> admissible_classes(const FactoredInteger& q);
std::vector<u64> admissible_residues(const FactoredInteger& q);

struct LiftRequest {
    /// When set, search integers b in (0, window_hi] instead of [0, Q).
    std::optional<BigInt> window_hi;
    /// Extra acceptance test applied to the candidate integer b.
    std::function<bool(const BigInt&)> accept;
};

/// Smallest b = a (mod q) admissible mod Q (q | Q). Throws NoAdmissibleLift
/// when the search range holds no such b.
ResidueClass lift_admissible(const ResidueClass& a, const FactoredInteger& Q, const LiftRequest& request = {});

} // namespace sumsq::admissibility
