#include "sumsq/witness.hpp"
#include "sumsq/admissibility.hpp"
#include "sumsq/error.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace sumsq::witness {

namespace {

using arith::mod_floor;
using u128 = unsigned __int128;

constexpr unsigned kInf = 1000;  // valuation of the zero residue

// One prime power of q together with the modulus the local search runs at:
// p^nu for odd p, 2^(nu+1) at p = 2 (the extra bit decides a parity later).
struct Local {
    u64 p;
    unsigned nu;
    u64 pnu;
    u64 m;
};

u64 ipow(u64 p, unsigned e)
{
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
}

std::vector<Local> locals_of(const FactoredInteger& q)
{
    std::vector<Local> out;
    for (const auto& [pb, nu] : q.factors()) {
        const double bits = (nu + (pb == 2 ? 1 : 0)) * std::log2(static_cast<double>(pb));
        if (bits >= 61.0) {
            throw Error(ErrorKind::InvalidArgument, "prime power " + pb.str() + "^" + std::to_string(nu) +
                                                        " is too large for the local search");
        }
        const u64 p = static_cast<u64>(pb);
        const u64 pnu = ipow(p, nu);
        out.push_back({p, nu, pnu, p == 2 ? 2 * pnu : pnu});
    }
    return out;
}

u64 reduce(const BigInt& x, u64 m) { return static_cast<u64>(mod_floor(x, BigInt(m))); }

unsigned vloc(u64 r, u64 p) { return r == 0 ? kInf : arith::valuation(r, p); }

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

// Roots X mod m of X^2 = c (mod p^nu), ascending.
std::vector<u64> local_roots(const Local& L, u64 c)
{
    std::vector<u64> roots = arith::sqrt_mod_prime_power(c % L.pnu, L.p, L.nu);
    if (L.m != L.pnu) {
        const std::size_t n = roots.size();
        for (std::size_t i = 0; i < n; ++i) roots.push_back(roots[i] + L.pnu);
        std::sort(roots.begin(), roots.end());
    }
    return roots;
}

// Valuation that gcd(x0, y0) must have at p.
unsigned required_mu(const Local& L, u64 a_loc)
{
    const u64 a = a_loc % L.pnu;
    const unsigned val = a == 0 ? L.nu : arith::valuation(a, L.p);
    if (L.p % 4 == 3 && val % 2 != 0) {
        throw Error(ErrorKind::HypothesisViolation, "a is not admissible mod " + std::to_string(L.p) + "^" +
                                                        std::to_string(L.nu));
    }
    return val / 2;
}

bool base_ok(const Local& L, unsigned mu_req, u64 x0, u64 y0)
{
    if (L.p % 4 == 1) return !(x0 % L.p == 0 && y0 % L.p == 0);
    return std::min(vloc(x0, L.p), vloc(y0, L.p)) == mu_req;
}

// Calls fn(x0, y0) on valid local bases in (y0, x0) order until fn returns true.
template <class Fn>
bool for_each_base(const Local& L, u64 a_loc, u64 limit, Fn&& fn)
{
    const unsigned mu_req = L.p % 4 == 1 ? 0 : required_mu(L, a_loc);
    u64 tried = 0;
    for (u64 y0 = 0; y0 < L.m; ++y0) {
        const u64 c = (a_loc % L.pnu + L.pnu - mulmod(y0, y0, L.pnu)) % L.pnu;
        for (u64 x0 : local_roots(L, c)) {
            if (++tried > limit) {
                throw Error(ErrorKind::SearchExhausted, "base search at p = " + std::to_string(L.p) +
                                                            " exceeded its candidate budget");
            }
            if (base_ok(L, mu_req, x0, y0) && fn(x0, y0)) return true;
        }
    }
    return false;
}

bool shift_ok(const Local& L, u64 h_loc, u64 x0, u64 y0, u64 u, u64 v)
{
    const unsigned gamma = std::min(vloc(u, L.p), vloc(v, L.p));
    const unsigned mu = std::min(vloc(x0, L.p), vloc(y0, L.p));
    if (L.p % 4 == 1) return gamma == 0;
    if (L.p % 4 == 3) return gamma <= mu && 2 * gamma <= L.nu;

    // p = 2
    if (2 * gamma + 2 > L.nu || gamma > mu + 1) return false;
    if (gamma <= mu) return true;
    // gamma = mu + 1: the cross term 2T(x0 r + y0 s) is only = 0 (mod 2^nu)
    // when both parities below work out.
    const u64 xp = (x0 >> mu) & 1, yp = (y0 >> mu) & 1;
    const u64 up = (u >> gamma) & 1, vp = (v >> gamma) & 1;
    if (((vp * xp) ^ (up * yp)) & 1) return false;
    const u64 m = L.m;
    const u64 sub = (mulmod(u, u, m) + mulmod(v, v, m) + 2 * ((mulmod(u, x0, m) + mulmod(v, y0, m)) % m)) % m;
    const u64 N = (h_loc % m + 2 * m - sub) % m;
    if (N % L.pnu != 0) {
        throw Error(ErrorKind::InternalInconsistency, "local shift equation does not hold at 2");
    }
    return ((N >> L.nu) & 1) == 0;
}

std::optional<std::pair<u64, u64>> first_shift(const Local& L, u64 ah_loc, u64 h_loc, u64 x0, u64 y0, u64 limit)
{
    u64 tried = 0;
    for (u64 v = 0; v < L.m; ++v) {
        const u64 yv = (y0 + v) % L.pnu;
        const u64 c = (ah_loc % L.pnu + L.pnu - mulmod(yv, yv, L.pnu)) % L.pnu;
        std::vector<u64> us;
        for (u64 X : local_roots(L, c)) us.push_back((X + L.m - x0 % L.m) % L.m);
        std::sort(us.begin(), us.end());
        for (u64 u : us) {
            if (++tried > limit) {
                throw Error(ErrorKind::SearchExhausted, "shift search at p = " + std::to_string(L.p) +
                                                            " exceeded its candidate budget");
            }
            if (shift_ok(L, h_loc, x0, y0, u, v)) return std::pair{u, v};
        }
    }
    return std::nullopt;
}

BigInt combine(const std::vector<Local>& locals, const std::vector<u64>& residues, BigInt* modulus)
{
    std::vector<ResidueClass> classes;
    for (std::size_t i = 0; i < locals.size(); ++i) classes.emplace_back(residues[i], locals[i].m);
    const ResidueClass r = arith::crt_combine(classes);
    if (modulus) *modulus = r.modulus();
    return r.value();
}

BaseSolution make_base(const BigInt& x0, const BigInt& y0, const BigInt& a, const FactoredInteger& q)
{
    BaseSolution b{x0, y0, ResidueClass(a, q.value()), q, {}};
    const BigInt g = boost::multiprecision::gcd(x0, y0);
    if (g != 0) {
        for (const auto& [p, nu] : q.factors()) b.per_prime_valuations[p] = arith::valuation(g, p);
    }
    return b;
}

// Case 1: bump u by multiples of M until gcd(u, v) has no prime outside q.
ShiftPair finalize_shift(BigInt u, BigInt v, const BigInt& M, const FactoredInteger& q)
{
    if (v == 0) v = M;
    auto stray_free = [&](BigInt g) {
        for (const auto& [p, nu] : q.factors()) {
            while (g % p == 0) g /= p;
        }
        return g == 1;
    };
    for (int j = 0; j < 1'000'000; ++j, u += M) {
        if (u == 0) continue;
        const BigInt g = boost::multiprecision::gcd(u, v);
        if (stray_free(g)) return {u, v, g};
    }
    throw Error(ErrorKind::SearchExhausted, "could not clear stray common factors of (u, v)");
}

void check_shift_preconditions(const FactoredInteger& q, const BigInt& a, const BigInt& h)
{
    if (q.exponent(2) == 1) throw Error(ErrorKind::HypothesisViolation, "nu_2(q) = 1 leaves no valid shift");
    if (!admissibility::admissible(mod_floor(a + h, q.value()), q)) {
        throw Error(ErrorKind::HypothesisViolation, "a + h is not admissible mod " + q.value().str());
    }
}

} // namespace

HypothesisVerdict check_hypotheses(const FactoredInteger& q, const BigInt& a, const BigInt& h, const BigInt& k)
{
    auto fail = [](std::string clause, std::string detail) { return HypothesisVerdict{false, clause, detail}; };
    if (q.is_zero()) return fail("q positive", "q = 0");
    if (h <= 0 || k <= 0 || h == k) return fail("offsets", "h and k must be distinct positive integers");
    for (const auto& [p, nu] : q.factors()) {
        if (p % 4 == 3 && nu % 2 != 0) {
            return fail("nu_p even for p = 3 mod 4", "nu_" + p.str() + "(q) = " + std::to_string(nu));
        }
    }
    const unsigned nu2 = q.exponent(2);
    if (nu2 % 2 != 0 || nu2 < 2) return fail("nu_2 even and >= 2", "nu_2(q) = " + std::to_string(nu2));
    const BigInt triple[3] = {a, a + h, a + k};
    const char* names[3] = {"a", "a+h", "a+k"};
    for (int i = 0; i < 3; ++i) {
        if (!admissibility::admissible(mod_floor(triple[i], q.value()), q)) {
            return fail(std::string(names[i]) + " admissible",
                        std::string(names[i]) + " = " + triple[i].str() + " is not admissible mod " + q.value().str());
        }
    }
    const BigInt two_pow = BigInt(1) << (nu2 - 1);
    for (int i = 0; i < 3; ++i) {
        if (mod_floor(triple[i], two_pow) == 0) {
            return fail(std::string(names[i]) + " not 0 mod 2^(nu_2-1)",
                        std::string(names[i]) + " = " + triple[i].str() + " is divisible by " + two_pow.str());
        }
    }
    return {};
}

BaseSolution solve_base(const BigInt& a, const FactoredInteger& q, const SearchLimits& limits)
{
    if (q.is_zero()) throw Error(ErrorKind::InvalidArgument, "q must be positive");
    if (!admissibility::admissible(mod_floor(a, q.value()), q)) {
        throw Error(ErrorKind::HypothesisViolation, a.str() + " is not admissible mod " + q.value().str());
    }
    for (const auto& [p, nu] : q.factors()) {
        if (p % 4 == 3 && nu % 2 != 0) {
            throw Error(ErrorKind::HypothesisViolation, "nu_" + p.str() + "(q) is odd");
        }
    }
    const auto locals = locals_of(q);
    std::vector<u64> xs, ys;
    for (const Local& L : locals) {
        const bool found = for_each_base(L, reduce(a, L.m), limits.base_candidates, [&](u64 x0, u64 y0) {
            xs.push_back(x0);
            ys.push_back(y0);
            return true;
        });
        if (!found) {
            throw Error(ErrorKind::SearchExhausted, "no local base solution at p = " + std::to_string(L.p));
        }
    }
    return make_base(combine(locals, xs, nullptr), combine(locals, ys, nullptr), a, q);
}

ShiftPair construct_shift(const BaseSolution& base, const BigInt& h, const SearchLimits& limits)
{
    const FactoredInteger& q = base.q;
    check_shift_preconditions(q, base.a.value(), h);
    const auto locals = locals_of(q);
    std::vector<u64> us, vs;
    for (const Local& L : locals) {
        auto s = first_shift(L, reduce(base.a.value() + h, L.m), reduce(h, L.m), reduce(base.x0, L.m),
                             reduce(base.y0, L.m), limits.shift_candidates);
        if (!s) {
            throw Error(ErrorKind::SearchExhausted, "no local shift for this base at p = " + std::to_string(L.p));
        }
        us.push_back(s->first);
        vs.push_back(s->second);
    }
    BigInt M = 1;
    const BigInt u = combine(locals, us, &M);
    const BigInt v = combine(locals, vs, nullptr);
    return finalize_shift(u, v, M, q);
}

WitnessFamily build_family(const BaseSolution& base, const ShiftPair& shift, const BigInt& h, const BigInt& k)
{
    const BigInt& q = base.q.value();
    if (base.q.exponent(2) < 2) {
        throw Error(ErrorKind::HypothesisViolation, "the family needs 4 | q (nu_2(q) >= 2)");
    }
    WitnessFamily f;
    f.q = base.q;
    f.a = base.a.value();
    f.h = h;
    f.k = k;
    f.x0 = base.x0;
    f.y0 = base.y0;
    f.u = shift.u;
    f.v = shift.v;
    f.g = boost::multiprecision::gcd(shift.u, shift.v);
    if (f.g == 0 || q % (2 * f.g) != 0) {
        throw Error(ErrorKind::InternalInconsistency, "2 gcd(u, v) does not divide q");
    }
    f.T = q / (2 * f.g);

    const BigInt N = h - f.u * f.u - f.v * f.v - 2 * (f.u * f.x0 + f.v * f.y0);
    if (N % q != 0) throw Error(ErrorKind::InternalInconsistency, "shift equation right-hand side is not divisible by q");
    const BigInt R = N / q;
    const BigInt ug = f.u / f.g, vg = f.v / f.g;
    const auto eg = arith::ext_gcd(ug, vg);
    BigInt r0 = eg.x * R;
    BigInt s0 = eg.y * R;
    // Normalize r0 into [0, |v/g|) and move s0 along the solution line.
    if (vg != 0) {
        const BigInt av = vg < 0 ? BigInt(-vg) : vg;
        const BigInt shift_steps = (r0 - mod_floor(r0, av)) / av;
        const BigInt step_sign = vg < 0 ? BigInt(-1) : BigInt(1);
        r0 -= shift_steps * av;
        s0 += shift_steps * step_sign * ug;
    }
    f.r0 = r0;
    f.s0 = s0;

    f.X0 = f.x0 + f.T * r0;
    f.X1 = f.T * vg;
    f.Y0 = f.y0 + f.T * s0;
    f.Y1 = -f.T * ug;
    f.A = f.X1 * f.X1 + f.Y1 * f.Y1;
    f.B = 2 * (f.X0 * f.X1 + f.Y0 * f.Y1);
    f.C = f.X0 * f.X0 + f.Y0 * f.Y0;
    f.eta = 2 * (f.X0 * f.Y1 - f.X1 * f.Y0);
    if (f.eta < 0) f.eta = -f.eta;

    std::string why;
    if (!verify_family(f, &why)) throw Error(ErrorKind::InternalInconsistency, "family check failed: " + why);
    return f;
}

WitnessFamily make_family(const FactoredInteger& q, const BigInt& a, const BigInt& h, const BigInt& k,
                          const SearchLimits& limits)
{
    const HypothesisVerdict verdict = check_hypotheses(q, a, h, k);
    if (!verdict.pass) throw Error(ErrorKind::HypothesisViolation, verdict.clause + ": " + verdict.detail);

    const auto locals = locals_of(q);
    std::vector<u64> xs, ys, us, vs;
    for (const Local& L : locals) {
        const u64 a_loc = reduce(a, L.m), ah_loc = reduce(a + h, L.m), h_loc = reduce(h, L.m);
        std::optional<std::pair<u64, u64>> shift;
        const bool found = for_each_base(L, a_loc, limits.base_candidates, [&](u64 x0, u64 y0) {
            shift = first_shift(L, ah_loc, h_loc, x0, y0, limits.shift_candidates);
            if (!shift) return false;
            xs.push_back(x0);
            ys.push_back(y0);
            return true;
        });
        if (!found) {
            throw Error(ErrorKind::SearchExhausted, "no compatible local base and shift at p = " + std::to_string(L.p));
        }
        us.push_back(shift->first);
        vs.push_back(shift->second);
    }
    BigInt M = 1;
    const BaseSolution base = make_base(combine(locals, xs, nullptr), combine(locals, ys, nullptr), a, q);
    const BigInt u = combine(locals, us, &M);
    const BigInt v = combine(locals, vs, nullptr);
    return build_family(base, finalize_shift(u, v, M, q), h, k);
}

bool verify_family(const WitnessFamily& f, std::string* why)
{
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const BigInt& q = f.q.value();
    if (f.g <= 0 || f.g != boost::multiprecision::gcd(f.u, f.v)) return fail("g is not gcd(u, v)");
    if (2 * f.g * f.T != q) return fail("T != q / (2g)");
    if ((f.T * f.T) % q != 0) return fail("q does not divide T^2");
    if (f.X1 != f.T * (f.v / f.g) || f.Y1 != -f.T * (f.u / f.g)) return fail("slopes of x(t), y(t)");
    if (f.X0 != f.x0 + f.T * f.r0 || f.Y0 != f.y0 + f.T * f.s0) return fail("intercepts of x(t), y(t)");
    // Degree-2 polynomial identities: agreement at three points is enough.
    for (int t = 0; t < 3; ++t) {
        const BigInt x = f.x_at(t), y = f.y_at(t), n = f.n_at(t);
        if (x * x + y * y != n) return fail("n(t) != x(t)^2 + y(t)^2 at t = " + std::to_string(t));
        const BigInt xu = x + f.u, yv = y + f.v;
        if (xu * xu + yv * yv != n + f.h) return fail("n(t) + h identity fails at t = " + std::to_string(t));
    }
    if (mod_floor(f.A, q) != 0 || mod_floor(f.B, q) != 0 || mod_floor(f.C - f.a, q) != 0) {
        return fail("n(t) is not identically a mod q");
    }
    if (f.A <= 0) return fail("A <= 0");
    if (f.B * f.B - 4 * f.A * f.C != -(f.eta * f.eta)) return fail("B^2 - 4AC != -eta^2");
    if (f.disc() > 0) return fail("disc(F) > 0");
    return true;
}

bool ObstructionReport::clean() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ObstructionCheck& c) { return c.ok; });
}

ObstructionReport check_local_obstructions(const WitnessFamily& f)
{
    ObstructionReport rep;
    const BigInt& q = f.q.value();
    const BigInt ak = f.a + f.k;

    for (const auto& [p, nu] : f.q.factors()) {
        if (p % 4 != 3) continue;
        const FactoredInteger pp = FactoredInteger::from_factors({{p, nu}});
        const bool ok = admissibility::admissible(mod_floor(ak, pp.value()), pp);
        rep.checks.push_back({"a+k admissible mod " + p.str() + "^" + std::to_string(nu), ok});
    }

    const unsigned nu2 = f.q.exponent(2);
    for (unsigned alpha = 2; alpha <= nu2 + 2; ++alpha) {
        const BigInt mod = BigInt(1) << alpha;
        const BigInt bad = BigInt(3) << (alpha - 2);
        // F mod 2^alpha is periodic in t with period 2^alpha.
        bool constant_bad = true;
        for (u64 t = 0; t < (u64{1} << alpha) && constant_bad; ++t) {
            if (mod_floor(f.F_at(t), mod) != bad) constant_bad = false;
        }
        rep.checks.push_back({"F(t) not constantly 3*2^" + std::to_string(alpha - 2) + " mod 2^" + std::to_string(alpha),
                              !constant_bad});
    }

    const auto table = arith::prime_table(100);
    for (std::uint32_t p : *table) {
        if (p > 100) break;
        if (p % 4 != 3 || q % p == 0) continue;
        const bool zero_poly = f.A % p == 0 && f.B % p == 0 && (f.C + f.k) % p == 0;
        rep.checks.push_back({"F not the zero polynomial mod " + std::to_string(p), !zero_poly});
    }

    rep.disc = f.disc();
    BigInt root;
    rep.disc_is_negative_square = rep.disc <= 0 && arith::is_square(-rep.disc, &root);

    if (!rep.clean()) {
        for (const auto& c : rep.checks) {
            if (!c.ok) throw Error(ErrorKind::ObstructionFound, c.description + " fails");
        }
    }
    return rep;
}

bool verify_certificate(const TripleCertificate& c, std::string* why)
{
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (c.q <= 0) return fail("q must be positive");
    if (c.n < 0) return fail("n must be nonnegative");
    if (mod_floor(c.n - c.a, c.q) != 0) return fail("n is not congruent to a mod q");
    const BigInt targets[3] = {c.n, c.n + c.h, c.n + c.k};
    for (int i = 0; i < 3; ++i) {
        if (c.reps[i].x * c.reps[i].x + c.reps[i].y * c.reps[i].y != targets[i]) {
            return fail("representation " + std::to_string(i) + " does not square up to " + targets[i].str());
        }
    }
    if (c.consecutive) {
        const BigInt lo = c.n, hi = c.n + std::max(c.h, c.k), mid = c.n + std::min(c.h, c.k);
        BigInt expect = lo + 1;
        for (const Exclusion& ex : c.evidence) {
            if (expect == mid) ++expect;
            if (ex.m != expect) return fail("evidence does not cover " + expect.str());
            if (ex.p % 4 != 3 || !arith::is_probable_prime(ex.p)) return fail("evidence prime " + ex.p.str() + " invalid");
            if (ex.e % 2 == 0 || ex.e == 0) return fail("evidence exponent must be odd");
            BigInt pe = 1;
            for (unsigned i = 0; i < ex.e; ++i) pe *= ex.p;
            if (ex.m % pe != 0 || (ex.m / pe) % ex.p == 0) return fail("evidence valuation wrong for " + ex.m.str());
            ++expect;
        }
        if (expect == mid) ++expect;
        if (expect != hi) return fail("evidence stops before " + hi.str());
    }
    return true;
}

void attach_consecutive_evidence(TripleCertificate& c, const ScanOptions& options)
{
    c.consecutive = false;
    c.evidence.clear();
    const BigInt span = std::max(c.h, c.k);
    if (span > BigInt(options.max_gap)) return;
    const BigInt mid = c.n + std::min(c.h, c.k);
    std::vector<Exclusion> evidence;
    for (BigInt m = c.n + 1; m < c.n + span; ++m) {
        if (m == mid) continue;
        arith::FactoredInteger fm;
        try {
            fm = arith::factorize(m, options.budget);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BudgetExceeded) return;
            throw;
        }
        const Exclusion* found = nullptr;
        Exclusion ex;
        for (const auto& [p, e] : fm.factors()) {
            if (p % 4 == 3 && e % 2 == 1) {
                ex = {m, p, e};
                found = &ex;
                break;
            }
        }
        if (!found) return;  // m is a sum of two squares
        evidence.push_back(ex);
    }
    c.consecutive = true;
    c.evidence = std::move(evidence);
}

namespace {

std::optional<TripleCertificate> certificate_at(const WitnessFamily& f, u64 t, const ScanOptions& options,
                                                bool& skipped)
{
    skipped = false;
    const BigInt tb = t;
    const BigInt F = f.F_at(tb);
    arith::FactoredInteger fac;
    try {
        fac = arith::factorize(F, options.budget);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        skipped = true;
        return std::nullopt;
    }
    const auto rep_k = arith::represent_two_squares(fac);
    if (!rep_k) return std::nullopt;
    TripleCertificate c;
    c.n = F - f.k;
    c.q = f.q.value();
    c.a = f.a;
    c.h = f.h;
    c.k = f.k;
    c.t = tb;
    const BigInt x = f.x_at(tb), y = f.y_at(tb);
    c.reps[0] = arith::canonical_pair(x, y);
    c.reps[1] = arith::canonical_pair(x + f.u, y + f.v);
    c.reps[2] = *rep_k;
    if (options.check_consecutive) attach_consecutive_evidence(c, options);
    std::string why;
    if (!verify_certificate(c, &why)) {
        throw Error(ErrorKind::InternalInconsistency, "certificate at t = " + std::to_string(t) + ": " + why);
    }
    return c;
}

struct Chunk {
    std::vector<TripleCertificate> certs;
    u64 scanned = 0;
    u64 skipped = 0;
};

Chunk scan_range(const WitnessFamily& f, u64 lo, u64 hi, const ScanOptions& options)
{
    Chunk out;
    for (u64 t = lo; t <= hi; ++t) {
        bool skipped = false;
        if (auto c = certificate_at(f, t, options, skipped)) out.certs.push_back(std::move(*c));
        ++out.scanned;
        if (skipped) ++out.skipped;
        if (t == std::numeric_limits<u64>::max()) break;
    }
    return out;
}

} // namespace

ScanResult scan_family(const WitnessFamily& f, u64 t_max, const ScanOptions& options)
{
    ScanResult result;
    const unsigned workers = std::max(1u, options.workers);
    if (workers == 1) {
        Chunk c = scan_range(f, 0, t_max, options);
        result.certificates = std::move(c.certs);
        result.scanned = c.scanned;
        result.skipped = c.skipped;
        return result;
    }
    const u64 total = t_max + 1;
    const u64 chunk = std::max<u64>(1, (total + 4 * workers - 1) / (4 * workers));
    std::vector<std::future<Chunk>> futures;
    for (u64 lo = 0; lo <= t_max; lo += chunk) {
        const u64 hi = std::min(t_max, lo + chunk - 1);
        futures.push_back(std::async(std::launch::async, scan_range, std::cref(f), lo, hi, std::cref(options)));
        if (hi == t_max) break;
    }
    // Chunks are ascending in t, so concatenation keeps certificates sorted.
    for (auto& fut : futures) {
        Chunk c = fut.get();
        for (auto& cert : c.certs) result.certificates.push_back(std::move(cert));
        result.scanned += c.scanned;
        result.skipped += c.skipped;
    }
    return result;
}

std::optional<TripleCertificate> first_certificate(const WitnessFamily& f, u64 t_max, const ScanOptions& options)
{
    for (u64 t = 0; t <= t_max; ++t) {
        bool skipped = false;
        if (auto c = certificate_at(f, t, options, skipped)) return c;
        if (t == std::numeric_limits<u64>::max()) break;
    }
    return std::nullopt;
}

} // namespace sumsq::witness
