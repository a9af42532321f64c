#include "sumsq/arith.hpp"
#include "sumsq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sumsq::arith {

BigInt mod_floor(const BigInt& a, const BigInt& m)
{
    if (m <= 0) throw Error(ErrorKind::InvalidArgument, "mod_floor: modulus must be positive");
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

BigInt isqrt(const BigInt& n)
{
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of a negative number");
    return boost::multiprecision::sqrt(n);
}

u64 isqrt(u64 n)
{
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(const BigInt& n, BigInt* root)
{
    if (n < 0) return false;
    BigInt r = isqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

u64 to_u64(const BigInt& n, const char* what)
{
    if (n < 0 || n > BigInt(std::numeric_limits<u64>::max())) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " does not fit in 64 bits");
    }
    return static_cast<u64>(n);
}

std::string to_decimal(const BigInt& n) { return n.str(); }

BigInt from_decimal(const std::string& s)
{
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                                          [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorKind::InvalidArgument, "not a decimal integer: '" + s + "'");
    }
    return BigInt(s);
}

// ---------------------------------------------------------------------------

ExtGcd ext_gcd(const BigInt& a, const BigInt& b)
{
    if (a == 0 && b == 0) throw Error(ErrorKind::DegenerateInput, "ext_gcd(0, 0) is undefined");
    BigInt old_r = a, r = b;
    BigInt old_s = 1, s = 0;
    BigInt old_t = 0, t = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

BigInt mod_inverse(const BigInt& a, const BigInt& m)
{
    if (m == 1) return 0;
    auto [g, x, y] = ext_gcd(mod_floor(a, m), m);
    if (g != 1) throw Error(ErrorKind::InvalidArgument, "no inverse of " + a.str() + " mod " + m.str());
    return mod_floor(x, m);
}

ResidueClass::ResidueClass(const BigInt& value, const BigInt& modulus)
{
    if (modulus <= 0) throw Error(ErrorKind::InvalidArgument, "residue class modulus must be positive");
    modulus_ = modulus;
    value_ = mod_floor(value, modulus);
}

ResidueClass ResidueClass::reduce(const BigInt& d) const
{
    if (d <= 0 || modulus_ % d != 0) {
        throw Error(ErrorKind::ModulusMismatch, d.str() + " does not divide " + modulus_.str());
    }
    return {value_, d};
}

ResidueClass crt_combine(std::span<const ResidueClass> congruences)
{
    for (std::size_t i = 0; i < congruences.size(); ++i) {
        for (std::size_t j = i + 1; j < congruences.size(); ++j) {
            BigInt g = boost::multiprecision::gcd(congruences[i].modulus(), congruences[j].modulus());
            if (g != 1) {
                throw Error(ErrorKind::NonCoprimeModuli,
                            "moduli #" + std::to_string(i) + " (" + congruences[i].modulus().str() + ") and #" +
                                std::to_string(j) + " (" + congruences[j].modulus().str() + ") share " + g.str());
            }
        }
    }
    BigInt x = 0, m = 1;
    for (const auto& c : congruences) {
        // x + m*t = c (mod c.m)
        BigInt t = mod_floor((c.value() - x) * mod_inverse(m, c.modulus()), c.modulus());
        x += m * t;
        m *= c.modulus();
    }
    return {x, m};
}

// ---------------------------------------------------------------------------
// Square roots modulo prime powers

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

u64 inverse_u64(u64 a, u64 m)
{
    __int128 old_r = a % m, r = m, old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw Error(ErrorKind::InternalInconsistency, "inverse_u64: not invertible");
    __int128 x = old_s % static_cast<__int128>(m);
    if (x < 0) x += m;
    return static_cast<u64>(x);
}

u64 ipow(u64 p, unsigned e)
{
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
}

// Tonelli-Shanks for an odd prime; nullopt when b is a non-residue.
std::optional<u64> sqrt_mod_prime(u64 b, u64 p)
{
    b %= p;
    if (b == 0) return 0;
    if (powmod(b, (p - 1) / 2, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(b, (p + 1) / 4, p);
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s, c = powmod(z, q, p), t = powmod(b, q, p), r = powmod(b, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 bb = c;
        for (u64 j = 0; j + 1 < m - i; ++j) bb = mulmod(bb, bb, p);
        m = i;
        c = mulmod(bb, bb, p);
        t = mulmod(t, c, p);
        r = mulmod(r, bb, p);
    }
    return r;
}

// Roots of y^2 = b mod p^m for b a unit.
std::vector<u64> sqrt_unit(u64 b, u64 p, unsigned m)
{
    const u64 pm = ipow(p, m);
    b %= pm;
    std::vector<u64> roots;
    if (p == 2) {
        if (m == 1) return {1};
        if (m == 2) return b % 4 == 1 ? std::vector<u64>{1, 3} : std::vector<u64>{};
        if (b % 8 != 1) return {};
        u64 y = 1;
        for (unsigned k = 3; k < m; ++k) {
            const u64 mod_next = u64{1} << (k + 1);
            if ((mulmod(y, y, mod_next) + mod_next - b % mod_next) % mod_next != 0) y += u64{1} << (k - 1);
        }
        const u64 half = pm / 2;
        roots = {y % pm, (pm - y) % pm, (y + half) % pm, (2 * pm - y - half) % pm};
    } else {
        auto r = sqrt_mod_prime(b, p);
        if (!r) return {};
        u64 y = *r, pk = p;
        for (unsigned k = 1; k < m; ++k) {
            const u64 pk1 = pk * p;
            const u64 t = (mulmod(y, y, pk1) + pk1 - b % pk1) % pk1;
            const u64 step = mulmod(t, inverse_u64(2 * y % pk1, pk1), pk1);
            y = (y + pk1 - step) % pk1;
            pk = pk1;
        }
        roots = {y, (pm - y) % pm};
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

} // namespace

std::vector<u64> sqrt_mod_prime_power(u64 a, u64 p, unsigned e)
{
    if (p < 2 || e == 0) throw Error(ErrorKind::InvalidArgument, "sqrt_mod_prime_power: need prime p and e >= 1");
    if (static_cast<double>(e) * std::log2(static_cast<double>(p)) >= 62.0) {
        throw Error(ErrorKind::InvalidArgument, "sqrt_mod_prime_power: p^e exceeds 2^62");
    }
    const u64 pe = ipow(p, e);
    a %= pe;
    std::vector<u64> out;
    if (a == 0) {
        const unsigned c = (e + 1) / 2;
        const u64 step = ipow(p, c);
        for (u64 x = 0; x < pe; x += step) out.push_back(x);
        return out;
    }
    const unsigned v = valuation(a, p);
    if (v % 2 != 0) return {};
    const unsigned m = e - v;
    const u64 pm = ipow(p, m);
    const u64 ph = ipow(p, v / 2);
    for (u64 r : sqrt_unit(a / ipow(p, v), p, m)) {
        for (u64 j = 0; j < ph; ++j) out.push_back(mulmod(ph, r + j * pm, pe));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace sumsq::arith
