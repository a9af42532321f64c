#include "sumsq/admissibility.hpp"
#include "sumsq/error.hpp"

#include <sstream>

namespace sumsq::admissibility {

std::string AdmissibilityVerdict::describe() const
{
    std::ostringstream os;
    os << cls.value() << " mod " << cls.modulus() << ": ";
    if (admissible) {
        os << "admissible";
    } else if (const auto* odd = std::get_if<OddPrimeViolation>(&*reason)) {
        os << "not admissible (p=" << odd->p << ", f_p=" << odd->f_p << " odd and below e_p=" << odd->e_p << ")";
    } else {
        const auto& two = std::get<TwoAdicViolation>(*reason);
        os << "not admissible (e_2=" << two.e_2 << ", f_2=" << two.f_2 << ", a/2^f_2 = " << two.quotient_mod4
           << " mod 4)";
    }
    return os.str();
}

AdmissibilityVerdict is_admissible(const ResidueClass& a, const FactoredInteger& q)
{
    if (q.is_zero() || a.modulus() != q.value()) {
        throw Error(ErrorKind::ModulusMismatch,
                    "class modulus " + a.modulus().str() + " differs from q = " + q.value().str());
    }
    AdmissibilityVerdict verdict{a, true, std::nullopt};
    const BigInt& value = a.value();
    for (const auto& [p, e] : q.factors()) {
        if (p % 4 == 1) continue;
        unsigned f = 0;
        if (value == 0) {
            f = e;
        } else {
            BigInt m = value;
            while (f < e && m % p == 0) {
                m /= p;
                ++f;
            }
        }
        if (p == 2) {
            if (e - f >= 2) {
                const unsigned quotient = static_cast<unsigned>((value >> f) % 4);
                if (quotient == 3) {
                    verdict.admissible = false;
                    verdict.reason = TwoAdicViolation{e, f, quotient};
                    return verdict;
                }
            }
        } else if (f % 2 != 0 && f != e) {
            verdict.admissible = false;
            verdict.reason = OddPrimeViolation{p, f, e};
            return verdict;
        }
    }
    return verdict;
}

bool admissible(const BigInt& a, const FactoredInteger& q)
{
    return is_admissible(ResidueClass(a, q.value()), q).admissible;
}

std::vector<u64> admissible_residues(const FactoredInteger& q)
{
    const u64 m = arith::to_u64(q.value(), "modulus");
    if (m > (u64{1} << 32)) throw Error(ErrorKind::InvalidArgument, "modulus too large to enumerate classes");
    std::vector<u64> out;
    for (u64 a = 0; a < m; ++a) {
        if (is_admissible(ResidueClass(a, m), q).admissible) out.push_back(a);
    }
    return out;
}

std::vector<ResidueClass> admissible_classes(const FactoredInteger& q)
{
    std::vector<ResidueClass> out;
    for (u64 a : admissible_residues(q)) out.emplace_back(a, q.value());
    return out;
}

ResidueClass lift_admissible(const ResidueClass& a, const FactoredInteger& Q, const LiftRequest& request)
{
    const BigInt& q = a.modulus();
    if (Q.is_zero() || Q.value() % q != 0) {
        throw Error(ErrorKind::ModulusMismatch, q.str() + " does not divide " + Q.value().str());
    }
    std::map<BigInt, unsigned> small_factors;
    for (const auto& [p, e] : Q.factors()) {
        unsigned eq = 0;
        BigInt m = q;
        while (m % p == 0) {
            m /= p;
            ++eq;
        }
        if (eq) small_factors[p] = eq;
    }
    const FactoredInteger qf = FactoredInteger::from_factors(small_factors);
    if (!is_admissible(a, qf).admissible) {
        throw Error(ErrorKind::HypothesisViolation, a.value().str() + " is not admissible mod " + q.str());
    }

    BigInt b = a.value();
    BigInt end = Q.value();  // exclusive
    if (request.window_hi) {
        if (b == 0) b = q;
        end = *request.window_hi + 1;
    }
    for (; b < end; b += q) {
        if (!is_admissible(ResidueClass(b, Q.value()), Q).admissible) continue;
        if (request.accept && !request.accept(b)) continue;
        return {b, Q.value()};
    }
    throw Error(ErrorKind::NoAdmissibleLift,
                "no admissible lift of " + a.value().str() + " mod " + q.str() + " to mod " + Q.value().str() +
                    (request.window_hi ? " within (0, " + request.window_hi->str() + "]" : std::string()));
}

} // namespace sumsq::admissibility
