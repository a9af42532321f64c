#include "sumsq/forcing.hpp"
#include "sumsq/admissibility.hpp"
#include "sumsq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace sumsq::forcing {

namespace {

using arith::mod_floor;

// Ascending primes, re-sieving a larger table when the current one runs out.
class PrimeCursor {
public:
    explicit PrimeCursor(std::uint32_t initial = 1u << 16) : table_(arith::prime_table(initial)) {}

    u64 next()
    {
        while (pos_ >= table_->size()) {
            const std::uint32_t limit = table_->back();
            if (limit >= (1u << 31)) throw Error(ErrorKind::SearchExhausted, "prime pool exhausted");
            table_ = arith::prime_table(limit * 2);
        }
        return (*table_)[pos_++];
    }

private:
    std::shared_ptr<const std::vector<std::uint32_t>> table_;
    std::size_t pos_ = 0;
};

u64 inverse_mod(u64 a, u64 p) { return static_cast<u64>(arith::mod_inverse(BigInt(a), BigInt(p))); }

FactoredInteger small_factored(u64 n) { return arith::factorize(BigInt(n)); }

} // namespace

double delta_constant(double theta1, double theta2)
{
    if (!(theta1 > 0 && theta2 > 0 && theta1 + theta2 < 1.0 / 18.0)) {
        throw Error(ErrorKind::DomainError, "need theta1, theta2 > 0 and theta1 + theta2 < 1/18");
    }
    const double pi = std::numbers::pi;
    const double c = std::sqrt(2.0) * (pi + 2.0) / (32.0 * pi);
    return c * (1.0 + theta1) / std::sqrt(theta1 * theta2);
}

std::vector<BigInt> bin_plan(unsigned M, double theta1, double theta2)
{
    if (M == 0) throw Error(ErrorKind::InvalidArgument, "bin_plan needs M >= 1");
    const double delta = delta_constant(theta1, theta2);
    std::vector<BigInt> sizes;
    sizes.emplace_back(static_cast<long long>(std::ceil(2.0 * delta * delta * delta)));
    for (unsigned i = 2; i <= M; ++i) sizes.push_back((BigInt(1) << (7 * i)) + 1);
    return sizes;
}

// ---------------------------------------------------------------------------
// Two-class tuples

bool linear_forms_admissible(u64 g, std::span<const u64> offsets)
{
    if (g == 0) return false;
    const u64 k = offsets.size();
    std::set<u64> primes;
    const FactoredInteger gf = small_factored(g);
    for (const auto& [p, e] : gf.factors()) primes.insert(static_cast<u64>(p));
    PrimeCursor cursor;
    for (u64 p = cursor.next(); p <= k; p = cursor.next()) primes.insert(p);

    for (u64 p : primes) {
        if (g % p == 0) {
            for (u64 h : offsets) {
                if (h % p == 0) return false;
            }
            continue;
        }
        if (p > k) continue;  // k forms cannot cover p residues
        const u64 ginv = inverse_mod(g % p, p);
        std::vector<bool> hit(p, false);
        u64 covered = 0;
        for (u64 h : offsets) {
            const u64 root = (p - h % p) % p * ginv % p;
            if (!hit[root]) {
                hit[root] = true;
                ++covered;
            }
        }
        if (covered == p) return false;
    }
    return true;
}

TupleDesign construct_two_class_tuple(const FactoredInteger& qf, u64 a, u64 b, unsigned j, std::span<const u64> sizes,
                                      const TupleOptions& options)
{
    const u64 q = arith::to_u64(qf.value(), "q");
    if (q == 0 || q % 2 == 0) throw Error(ErrorKind::InvalidArgument, "tuple construction needs an odd modulus q");
    if (a >= q || b >= q) throw Error(ErrorKind::InvalidArgument, "classes must be reduced mod q");
    if (sizes.empty() || j < 1 || j > sizes.size()) {
        throw Error(ErrorKind::InvalidArgument, "transition index j must lie in [1, number of bins]");
    }
    if (options.residue_mod4 > 3) throw Error(ErrorKind::InvalidArgument, "residue_mod4 must be in [0, 4)");
    for (u64 cls : {a, b}) {
        if (!admissibility::admissible(cls, qf)) {
            throw Error(ErrorKind::HypothesisViolation, std::to_string(cls) + " is not admissible mod " + std::to_string(q));
        }
        if (std::gcd(cls, q) != 1) {
            throw Error(ErrorKind::HypothesisViolation, "class " + std::to_string(cls) +
                                                            " shares a factor with q, so q x + h is never admissible");
        }
    }
    u64 total = 0;
    for (u64 s : sizes) {
        if (s == 0) throw Error(ErrorKind::InvalidArgument, "bin sizes must be positive");
        total += s;
        if (total > options.max_offsets) {
            throw Error(ErrorKind::SearchExhausted, "tuple of " + std::to_string(total) + "+ offsets exceeds the cap of " +
                                                        std::to_string(options.max_offsets));
        }
    }

    // Per prime p <= total + 1 (p not dividing q): residues n mod p already
    // killed by some chosen form.
    std::vector<u64> primes;
    {
        PrimeCursor cursor;
        for (u64 p = cursor.next(); p <= total + 1; p = cursor.next()) {
            if (q % p != 0) primes.push_back(p);
        }
    }
    std::vector<std::vector<bool>> covered(primes.size());
    std::vector<u64> covered_count(primes.size(), 0);
    std::vector<u64> qinv(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        covered[i].assign(primes[i], false);
        qinv[i] = inverse_mod(q % primes[i], primes[i]);
    }
    auto root_of = [&](std::size_t i, u64 h) { return (primes[i] - h % primes[i]) % primes[i] * qinv[i] % primes[i]; };

    TupleDesign design;
    design.q = q;
    design.a = a;
    design.b = b;
    design.j = j;
    design.bins.assign(sizes.begin(), sizes.end());
    design.residue_mod4 = options.residue_mod4;

    const u64 step = 4 * q;
    u64 last = 0;
    for (std::size_t bin = 0; bin < sizes.size(); ++bin) {
        const u64 cls = bin < j ? a : b;
        // Smallest h > last with h = cls (mod q) and h = residue (mod 4).
        const auto start = arith::crt_combine(std::vector<ResidueClass>{{cls, q}, {options.residue_mod4, 4}});
        u64 h = static_cast<u64>(start.value());
        if (h <= last) h += (last - h) / step * step + step;
        if (h == 0) h = step;
        for (u64 count = 0; count < sizes[bin]; ++count) {
            while (true) {
                if (h > options.offset_cap) {
                    throw Error(ErrorKind::SearchExhausted, "greedy offset scan passed the cap " +
                                                                std::to_string(options.offset_cap));
                }
                bool ok = true;
                for (std::size_t i = 0; i < primes.size(); ++i) {
                    if (covered_count[i] + 1 < primes[i]) continue;
                    if (!covered[i][root_of(i, h)]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) break;
                h += step;
            }
            design.offsets.push_back(h);
            for (std::size_t i = 0; i < primes.size(); ++i) {
                const u64 r = root_of(i, h);
                if (!covered[i][r]) {
                    covered[i][r] = true;
                    ++covered_count[i];
                }
            }
            last = h;
            h += step;
        }
    }
    return design;
}

std::vector<std::pair<std::string, bool>> verify_tuple(const TupleDesign& d)
{
    std::vector<std::pair<std::string, bool>> checks;
    u64 total = 0;
    for (u64 s : d.bins) total += s;
    checks.emplace_back("offset count equals the sum of bin sizes", d.offsets.size() == total);
    checks.emplace_back("offsets strictly increasing", std::adjacent_find(d.offsets.begin(), d.offsets.end(),
                                                                          std::greater_equal<u64>()) == d.offsets.end());
    checks.emplace_back("every offset = " + std::to_string(d.residue_mod4) + " mod 4",
                        std::all_of(d.offsets.begin(), d.offsets.end(), [&](u64 h) { return h % 4 == d.residue_mod4; }));

    bool classes_ok = d.offsets.size() == total;
    unsigned changes = 0;
    if (classes_ok) {
        std::size_t idx = 0;
        for (std::size_t bin = 0; bin < d.bins.size(); ++bin) {
            const u64 cls = bin < d.j ? d.a : d.b;
            for (u64 c = 0; c < d.bins[bin]; ++c, ++idx) {
                if (d.offsets[idx] % d.q != cls) classes_ok = false;
                if (idx > 0 && d.offsets[idx] % d.q != d.offsets[idx - 1] % d.q) ++changes;
            }
        }
    }
    checks.emplace_back("classes: a on bins 1..j, b afterwards", classes_ok);
    const unsigned expected = (d.j < d.bins.size() && d.a != d.b) ? 1 : 0;
    checks.emplace_back("exactly one transition point", changes == expected);
    checks.emplace_back("forms q x + h_i admissible", linear_forms_admissible(d.q, d.offsets));
    if (d.theta1 && d.theta2) {
        const auto plan = bin_plan(static_cast<unsigned>(d.bins.size()), *d.theta1, *d.theta2);
        bool sizes_ok = true;
        for (std::size_t i = 0; i < plan.size(); ++i) sizes_ok = sizes_ok && BigInt(d.bins[i]) >= plan[i];
        checks.emplace_back("bin sizes meet the minimal plan", sizes_ok);
    }
    return checks;
}

// ---------------------------------------------------------------------------
// Gap blocking

GapBlocking gap_blocking(u64 g, std::span<const u64> offsets)
{
    if (g == 0 || g % 2 == 0) throw Error(ErrorKind::InvalidArgument, "gap_blocking needs an odd g");
    if (offsets.empty()) throw Error(ErrorKind::InvalidArgument, "gap_blocking needs at least one offset");
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        if (offsets[i] <= offsets[i - 1]) throw Error(ErrorKind::InvalidArgument, "offsets must be strictly increasing");
    }
    GapBlocking out;
    std::set<u64> used;
    std::vector<ResidueClass> classes;
    FactoredInteger::FactorMap Qf;
    std::size_t next_offset = 0;
    for (u64 t = offsets.front() + 1; t < offsets.back(); ++t) {
        while (next_offset < offsets.size() && offsets[next_offset] < t) ++next_offset;
        if (offsets[next_offset] == t) continue;
        PrimeCursor cursor(1u << 12);
        u64 p = 0;
        while (true) {
            p = cursor.next();
            if (p % 4 != 3 || g % p == 0 || used.count(p)) continue;
            const bool clash = std::any_of(offsets.begin(), offsets.end(), [&](u64 h) { return (t % p) == (h % p); });
            if (!clash) break;
        }
        used.insert(p);
        const BigInt p2 = BigInt(p) * p;
        // g a + t = p (mod p^2)
        const BigInt value = mod_floor((BigInt(p) - t) * arith::mod_inverse(BigInt(g), p2), p2);
        classes.emplace_back(value, p2);
        Qf[BigInt(p)] = 2;
        out.blocks.emplace_back(t, p);
    }
    out.Q = FactoredInteger::from_factors(Qf);
    out.a = classes.empty() ? BigInt(0) : arith::crt_combine(classes).value();
    for (const auto& [name, ok] : verify_gap_blocking(g, offsets, out)) {
        if (!ok) throw Error(ErrorKind::InternalInconsistency, "gap blocking check failed: " + name);
    }
    return out;
}

std::vector<std::pair<std::string, bool>> verify_gap_blocking(u64 g, std::span<const u64> offsets,
                                                              const GapBlocking& gb)
{
    std::vector<std::pair<std::string, bool>> checks;
    std::set<u64> primes;
    bool distinct = true, shape = true, exact = true, clear = true;
    for (const auto& [t, p] : gb.blocks) {
        distinct = distinct && primes.insert(p).second;
        shape = shape && p % 4 == 3 && arith::is_probable_prime(p) && g % p != 0 && gb.Q.exponent(p) == 2;
        const BigInt v = BigInt(g) * gb.a + t;
        exact = exact && v > 0 && arith::valuation(v, BigInt(p)) == 1;
        for (u64 h : offsets) clear = clear && (BigInt(g) * gb.a + h) % p != 0;
    }
    std::set<u64> blocked;
    for (const auto& bt : gb.blocks) blocked.insert(bt.first);
    bool covers = true;
    if (!offsets.empty()) {
        std::set<u64> hs(offsets.begin(), offsets.end());
        for (u64 t = offsets.front() + 1; t < offsets.back(); ++t) covers = covers && (hs.count(t) || blocked.count(t));
    }
    checks.emplace_back("every gap integer is blocked", covers);
    checks.emplace_back("blocking primes distinct", distinct);
    checks.emplace_back("blocking primes = 3 mod 4, prime, coprime to g, squared in Q", shape);
    checks.emplace_back("q_t exactly divides g a + t", exact);
    checks.emplace_back("no q_t divides g a + h_j", clear);
    return checks;
}

// ---------------------------------------------------------------------------
// Blocking systems

BlockingSystem build_blocking_system(const FactoredInteger& q, u64 a, u64 b, u64 c)
{
    const u64 qv = arith::to_u64(q.value(), "q");
    if (qv == 0) throw Error(ErrorKind::InvalidArgument, "q must be positive");
    for (u64 cls : {a, b, c}) {
        if (cls >= qv) throw Error(ErrorKind::InvalidArgument, "classes must be reduced mod q");
        if (!admissibility::admissible(cls, q)) {
            throw Error(ErrorKind::HypothesisViolation, std::to_string(cls) + " is not admissible mod " + std::to_string(qv));
        }
    }
    BlockingSystem s;
    s.q = q;
    s.a = a;
    s.b = b;
    s.c = c;

    const BigInt q2 = BigInt(qv) * qv;
    const BigInt four_q2 = 4 * q2;
    const FactoredInteger Q4 = FactoredInteger::from_factors({{BigInt(2), 2}}) * q * q;
    const unsigned V = Q4.exponent(2);
    const BigInt two_pow = BigInt(1) << (V - 1);

    // Lifts b = cls (mod q) admissible mod 4q^2 and nonzero mod 2^(V-1), so
    // the triple later meets the 2-adic hypothesis of the witness family.
    auto lift = [&](u64 cls, const BigInt& window) {
        admissibility::LiftRequest req;
        req.window_hi = window;
        req.accept = [&](const BigInt& v) { return mod_floor(v, two_pow) != 0; };
        const ResidueClass r = admissibility::lift_admissible(ResidueClass(cls, qv), Q4, req);
        return r.value() == 0 ? four_q2 : r.value();
    };
    auto lift_all = [&](const BigInt& window) {
        s.a3 = lift(a, window);
        s.b3 = lift(b, window);
        s.c3 = lift(c, window);
    };
    try {
        lift_all(q2);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoAdmissibleLift) throw;
        s.window_widened = true;
        try {
            lift_all(four_q2);
        } catch (const Error& e2) {
            if (e2.kind() != ErrorKind::NoAdmissibleLift) throw;
            throw Error(ErrorKind::LiftWindowEmpty, e2.what());
        }
    }
    s.a2 = mod_floor(s.a3, q2);
    s.b2 = mod_floor(s.b3, q2);
    s.c2 = mod_floor(s.c3, q2);

    BigInt h = mod_floor(s.b3 - s.a3, four_q2);
    BigInt k = mod_floor(s.c3 - s.a3, four_q2);
    if (h == 0) h = four_q2;
    if (k == 0) k = four_q2;
    if (k <= h) k += four_q2;
    s.h = arith::to_u64(h, "h");
    s.k = arith::to_u64(k, "k");

    FactoredInteger::FactorMap Tf = Q4.factors();
    std::vector<ResidueClass> classes{ResidueClass(s.a3, four_q2)};
    PrimeCursor cursor;
    for (u64 i = 1; i < s.k; ++i) {
        if (i == s.h) continue;
        u64 p = 0;
        do {
            p = cursor.next();
        } while (p % 4 != 3 || p <= s.k || qv % p == 0);
        s.blocking_primes[i] = p;
        const BigInt p2 = BigInt(p) * p;
        classes.emplace_back(BigInt(p) - i, p2);
        Tf[BigInt(p)] = 2;
    }
    s.T = FactoredInteger::from_factors(Tf);
    s.a_T = arith::crt_combine(classes);

    for (const auto& [name, ok] : verify_blocking_system(s)) {
        if (!ok) throw Error(ErrorKind::InternalInconsistency, "blocking system check failed: " + name);
    }
    return s;
}

std::vector<std::pair<std::string, bool>> verify_blocking_system(const BlockingSystem& s)
{
    std::vector<std::pair<std::string, bool>> checks;
    const BigInt qv = s.q.value();
    const BigInt q2 = qv * qv;
    const BigInt four_q2 = 4 * q2;
    const FactoredInteger Q4 = FactoredInteger::from_factors({{BigInt(2), 2}}) * s.q * s.q;

    auto adm = [](const BigInt& v, const FactoredInteger& m) { return admissibility::admissible(mod_floor(v, m.value()), m); };
    const BigInt lifts[3] = {s.a3, s.b3, s.c3};
    const BigInt lows[3] = {s.a2, s.b2, s.c2};
    const u64 targets[3] = {s.a, s.b, s.c};
    bool lifts_ok = true;
    const BigInt window = s.window_widened ? four_q2 : q2;
    for (int i = 0; i < 3; ++i) {
        lifts_ok = lifts_ok && lifts[i] > 0 && lifts[i] <= window && mod_floor(lifts[i] - targets[i], qv) == 0 &&
                   mod_floor(lifts[i] - lows[i], q2) == 0 && adm(lifts[i], Q4) && adm(lows[i], s.q * s.q);
    }
    checks.emplace_back("lifts reduce to a, b, c and are admissible mod q^2 and 4q^2", lifts_ok);
    checks.emplace_back("a3 + h = b3 and a3 + k = c3 mod 4q^2, 0 < h < k",
                        mod_floor(s.a3 + s.h - s.b3, four_q2) == 0 && mod_floor(s.a3 + s.k - s.c3, four_q2) == 0 &&
                            0 < s.h && s.h < s.k);

    bool primes_ok = true;
    std::set<BigInt> seen;
    FactoredInteger::FactorMap expect = Q4.factors();
    for (u64 i = 1; i < s.k; ++i) {
        if (i == s.h) continue;
        auto it = s.blocking_primes.find(i);
        if (it == s.blocking_primes.end()) {
            primes_ok = false;
            continue;
        }
        const BigInt& p = it->second;
        primes_ok = primes_ok && p % 4 == 3 && arith::is_probable_prime(p) && qv % p != 0 && p > s.k &&
                    seen.insert(p).second;
        expect[p] = 2;
    }
    primes_ok = primes_ok && s.blocking_primes.size() == s.k - 2;
    checks.emplace_back("blocking primes: one per gap index, distinct, = 3 mod 4, > k, coprime to q", primes_ok);

    BigInt T = 1;
    for (const auto& [p, e] : expect) T *= boost::multiprecision::pow(p, e);
    checks.emplace_back("T = 4q^2 prod p_i^2 with matching factorization",
                        s.T.factors() == expect && s.T.value() == T && s.a_T.modulus() == T);

    bool crt_ok = mod_floor(s.a_T.value() - s.a3, four_q2) == 0;
    for (const auto& [i, p] : s.blocking_primes) crt_ok = crt_ok && mod_floor(s.a_T.value() - (p - i), p * p) == 0;
    checks.emplace_back("a_T = a3 mod 4q^2 and a_T = p_i - i mod p_i^2", crt_ok);

    const BigInt& aT = s.a_T.value();
    checks.emplace_back("a_T, a_T + h, a_T + k admissible mod T",
                        adm(aT, s.T) && adm(aT + s.h, s.T) && adm(aT + s.k, s.T));
    bool blocked = true;
    for (u64 i = 1; i < s.k; ++i) {
        if (i == s.h) continue;
        blocked = blocked && !adm(aT + i, s.T);
    }
    checks.emplace_back("a_T + i not admissible mod T for every other 0 < i < k", blocked);

    const auto verdict = witness::check_hypotheses(s.T, aT, BigInt(s.h), BigInt(s.k));
    checks.emplace_back("witness-family hypotheses hold for (T, a_T, h, k)" +
                            (verdict.pass ? std::string() : " [" + verdict.clause + ": " + verdict.detail + "]"),
                        verdict.pass);
    return checks;
}

TripleReport end_to_end_triple(const FactoredInteger& q, u64 a, u64 b, u64 c, u64 x_budget,
                               const TripleOptions& options)
{
    TripleReport report;
    report.system = build_blocking_system(q, a, b, c);

    const auto spec = census::PatternSpec::make(q, {a, b, c});
    const auto occ = census::find_first_occurrence(spec, x_budget, options.census);
    if (!occ) {
        throw Error(ErrorKind::NoneFoundWithinBudget,
                    "no occurrence of the pattern with E_n <= " + std::to_string(x_budget));
    }
    report.occurrence = *occ;

    witness::TripleCertificate& cert = report.certificate;
    cert.n = occ->values[0];
    cert.q = q.value();
    cert.a = a;
    cert.h = occ->values[1] - occ->values[0];
    cert.k = occ->values[2] - occ->values[0];
    for (int i = 0; i < 3; ++i) {
        const auto rep = arith::represent_two_squares(arith::factorize(BigInt(occ->values[i])));
        if (!rep) throw Error(ErrorKind::InternalInconsistency, "census member is not a sum of two squares");
        cert.reps[i] = *rep;
    }
    witness::ScanOptions scan = options.scan;
    scan.max_gap = std::max<u64>(scan.max_gap, occ->values[2] - occ->values[0]);
    witness::attach_consecutive_evidence(cert, scan);
    std::string why;
    if (!cert.consecutive || !witness::verify_certificate(cert, &why)) {
        throw Error(ErrorKind::InternalInconsistency, "census triple failed certification: " + why);
    }
    if (options.build_family) {
        report.family = witness::make_family(report.system.T, report.system.a_T.value(), BigInt(report.system.h),
                                             BigInt(report.system.k));
    }
    return report;
}

} // namespace sumsq::forcing
