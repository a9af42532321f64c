#include "sumsq/arith.hpp"
#include "sumsq/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <numeric>
#include <mutex>
#include <sstream>

namespace sumsq::arith {

namespace {

const BigInt kU64Max = BigInt(std::numeric_limits<u64>::max());
const BigInt kU127Limit = BigInt(1) << 127;

u128 to_u128(const BigInt& n)
{
    u128 lo = static_cast<u64>(n & kU64Max);
    u128 hi = static_cast<u64>(n >> 64);
    return (hi << 64) | lo;
}

BigInt from_u128(u128 v)
{
    BigInt r = static_cast<u64>(v >> 64);
    r <<= 64;
    r |= static_cast<u64>(v);
    return r;
}

u128 gcd128(u128 a, u128 b)
{
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Modular rings used by Miller-Rabin and rho. Each keeps elements in a
// canonical internal representation so that equality and gcd with the
// modulus can be taken on the representation directly.

struct Ring64 {
    using Int = u64;
    u64 n;

    explicit Ring64(u64 m) : n(m) {}
    u64 from(u64 x) const { return x % n; }
    u64 to(u64 x) const { return x; }
    u64 one() const { return 1 % n; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % n); }
    u64 add(u64 a, u64 b) const
    {
        u64 s = a + b;
        return (s < a || s >= n) ? s - n : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (n - b); }
    static u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }
};

// Montgomery arithmetic with R = 2^128 for odd moduli below 2^127.
struct Ring128 {
    using Int = u128;
    u128 n;
    u128 n_neg_inv;  // -n^{-1} mod 2^128
    u128 r2;         // R^2 mod n

    explicit Ring128(u128 m) : n(m)
    {
        u128 inv = m;
        for (int i = 0; i < 7; ++i) inv *= 2 - m * inv;
        n_neg_inv = -inv;
        u128 r = (-n) % n;  // 2^128 mod n
        r2 = from_plain_mul(r, r);
    }

    static void mul_wide(u128 a, u128 b, u128& hi, u128& lo)
    {
        const u128 mask = ~u64{0};
        u128 a0 = a & mask, a1 = a >> 64, b0 = b & mask, b1 = b >> 64;
        u128 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
        u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
        lo = (mid << 64) | (p00 & mask);
        hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    }

    // a*b mod n without Montgomery form; used only during setup.
    u128 from_plain_mul(u128 a, u128 b) const
    {
        u128 result = 0;
        a %= n;
        while (b != 0) {
            if (b & 1) {
                result += a;
                if (result >= n) result -= n;
            }
            a += a;
            if (a >= n) a -= n;
            b >>= 1;
        }
        return result;
    }

    u128 redc(u128 hi, u128 lo) const
    {
        u128 m = lo * n_neg_inv;
        u128 mhi, mlo;
        mul_wide(m, n, mhi, mlo);
        u128 sum_lo = lo + mlo;
        u128 carry = sum_lo < lo ? 1 : 0;
        u128 t = hi + mhi + carry;
        return t >= n ? t - n : t;
    }

    u128 mul(u128 a, u128 b) const
    {
        u128 hi, lo;
        mul_wide(a, b, hi, lo);
        return redc(hi, lo);
    }
    u128 from(u128 x) const { return mul(x % n, r2); }
    u128 to(u128 x) const { return redc(0, x); }
    u128 one() const { return from(1); }
    u128 add(u128 a, u128 b) const
    {
        u128 s = a + b;
        return s >= n ? s - n : s;
    }
    u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + (n - b); }
    static u128 gcd(u128 a, u128 b) { return gcd128(a, b); }
};

struct RingBig {
    using Int = BigInt;
    BigInt n;

    explicit RingBig(BigInt m) : n(std::move(m)) {}
    BigInt from(const BigInt& x) const { return mod_floor(x, n); }
    BigInt to(const BigInt& x) const { return x; }
    BigInt one() const { return BigInt(1) % n; }
    BigInt mul(const BigInt& a, const BigInt& b) const { return (a * b) % n; }
    BigInt add(const BigInt& a, const BigInt& b) const
    {
        BigInt s = a + b;
        if (s >= n) s -= n;
        return s;
    }
    BigInt sub(const BigInt& a, const BigInt& b) const { return a >= b ? BigInt(a - b) : BigInt(a + n - b); }
    static BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
};

unsigned bit_length(u64 x) { return 64 - static_cast<unsigned>(std::countl_zero(x)); }
unsigned bit_length(u128 x)
{
    u64 hi = static_cast<u64>(x >> 64);
    return hi ? 64 + bit_length(hi) : bit_length(static_cast<u64>(x));
}
unsigned bit_length(const BigInt& x) { return x == 0 ? 0 : static_cast<unsigned>(msb(x)) + 1; }

bool test_bit(u64 x, unsigned i) { return (x >> i) & 1; }
bool test_bit(u128 x, unsigned i) { return (x >> i) & 1; }
bool test_bit(const BigInt& x, unsigned i) { return bit_test(x, i); }

template <class Ring, class Int>
auto ring_pow(const Ring& R, decltype(R.one()) base, const Int& e)
{
    auto result = R.one();
    for (unsigned i = bit_length(e); i-- > 0;) {
        result = R.mul(result, result);
        if (test_bit(e, i)) result = R.mul(result, base);
    }
    return result;
}

constexpr std::array<unsigned, 24> kWitnessBases = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                                    41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

template <class Ring>
bool miller_rabin(const Ring& R, std::size_t base_count)
{
    using Int = typename Ring::Int;
    const Int& n = R.n;
    Int d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    const auto one = R.one();
    const auto minus_one = R.sub(R.from(Int(0)), one);
    for (std::size_t i = 0; i < base_count; ++i) {
        Int b = Int(kWitnessBases[i]);
        if (b % n == 0) continue;
        auto x = ring_pow(R, R.from(b), d);
        if (x == one || x == minus_one) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = R.mul(x, x);
            if (x == minus_one) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

const BigInt kDeterministic13 = BigInt("3317044064679887385961981");

// Pollard-Brent rho with f(x) = x^2 + c. Returns a proper divisor or 0.
template <class Ring>
typename Ring::Int brent_rho(const Ring& R, unsigned c_seed, u64 max_iterations)
{
    using Int = typename Ring::Int;
    const Int& n = R.n;
    const auto c = R.from(Int(c_seed));
    auto f = [&](const auto& v) { return R.add(R.mul(v, v), c); };

    auto y = R.from(Int(2));
    auto x = y;
    auto ys = y;
    auto q = R.one();
    Int g = 1;
    const u64 m = 128;
    u64 r = 1;
    u64 iterations = 0;
    while (g == 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        while (k < r && g == 1) {
            ys = y;
            const u64 steps = std::min(m, r - k);
            for (u64 i = 0; i < steps; ++i) {
                y = f(y);
                q = R.mul(q, R.sub(x, y));
            }
            g = Ring::gcd(Int(q), n);
            k += m;
        }
        iterations += r;
        r *= 2;
        if (g == 1 && iterations > max_iterations) return 0;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = Ring::gcd(Int(R.sub(x, ys)), n);
        } while (g == 1);
    }
    return g == n ? Int(0) : g;
}

BigInt split_composite(const BigInt& n, const FactorBudget& budget)
{
    for (unsigned attempt = 0; attempt < budget.rho_attempts; ++attempt) {
        const unsigned c = 1 + attempt;
        if (n <= kU64Max) {
            u64 d = brent_rho(Ring64(static_cast<u64>(n)), c, budget.rho_iterations);
            if (d != 0) return d;
        } else if (n < kU127Limit) {
            u128 d = brent_rho(Ring128(to_u128(n)), c, budget.rho_iterations);
            if (d != 0) return from_u128(d);
        } else {
            BigInt d = brent_rho(RingBig(n), c, budget.rho_iterations);
            if (d != 0) return d;
        }
    }
    return 0;
}

void factor_cofactor(const BigInt& n, const FactorBudget& budget, FactoredInteger::FactorMap& out)
{
    std::vector<BigInt> pending{n};
    while (!pending.empty()) {
        BigInt m = std::move(pending.back());
        pending.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            ++out[m];
            continue;
        }
        BigInt root;
        if (is_square(m, &root)) {
            pending.push_back(root);
            pending.push_back(root);
            continue;
        }
        BigInt d = split_composite(m, budget);
        if (d == 0) {
            throw Error(ErrorKind::BudgetExceeded, "could not split composite " + to_decimal(m) +
                                                       " within the rho budget");
        }
        pending.push_back(d);
        pending.push_back(m / d);
    }
}

} // namespace

// ---------------------------------------------------------------------------

FactoredInteger FactoredInteger::zero()
{
    FactoredInteger z;
    z.value_ = 0;
    z.zero_ = true;
    return z;
}

FactoredInteger FactoredInteger::from_factors(FactorMap factors)
{
    FactoredInteger f;
    for (auto it = factors.begin(); it != factors.end();) {
        if (it->second == 0) {
            it = factors.erase(it);
            continue;
        }
        if (it->first < 2) throw Error(ErrorKind::InvalidArgument, "factor keys must be primes");
        f.value_ *= boost::multiprecision::pow(it->first, it->second);
        ++it;
    }
    f.factors_ = std::move(factors);
    return f;
}

unsigned FactoredInteger::exponent(const BigInt& p) const
{
    auto it = factors_.find(p);
    return it == factors_.end() ? 0 : it->second;
}

FactoredInteger FactoredInteger::operator*(const FactoredInteger& rhs) const
{
    if (zero_ || rhs.zero_) return zero();
    FactorMap merged = factors_;
    for (const auto& [p, e] : rhs.factors_) merged[p] += e;
    return from_factors(std::move(merged));
}

std::string FactoredInteger::to_string() const
{
    if (zero_) return "0";
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, e] : factors_) {
        if (!first) os << " * ";
        first = false;
        os << p;
        if (e > 1) os << '^' << e;
    }
    return os.str();
}

std::shared_ptr<const std::vector<std::uint32_t>> prime_table(std::uint32_t limit)
{
    static std::mutex mutex;
    static std::shared_ptr<const std::vector<std::uint32_t>> cached;
    static std::uint32_t cached_limit = 0;

    std::lock_guard lock(mutex);
    if (cached && cached_limit >= limit) return cached;

    const std::uint32_t bound = std::max<std::uint32_t>(limit, 1u << 16);
    std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
    auto primes = std::make_shared<std::vector<std::uint32_t>>();
    for (u64 i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes->push_back(static_cast<std::uint32_t>(i));
        for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
    cached = std::move(primes);
    cached_limit = bound;
    return cached;
}

bool is_probable_prime(u64 n)
{
    if (n < 2) return false;
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;
    return miller_rabin(Ring64(n), 12);
}

bool is_probable_prime(const BigInt& n)
{
    if (n <= kU64Max) return n >= 2 && is_probable_prime(static_cast<u64>(n));
    for (unsigned p : kWitnessBases) {
        if (n % p == 0) return false;
    }
    const std::size_t bases = n < kDeterministic13 ? 13 : kWitnessBases.size();
    if (n < kU127Limit) return miller_rabin(Ring128(to_u128(n)), bases);
    return miller_rabin(RingBig(n), bases);
}

FactoredInteger factorize(const BigInt& n, const FactorBudget& budget)
{
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "factorize: negative input");
    if (n == 0) return FactoredInteger::zero();

    FactoredInteger::FactorMap factors;
    const auto table = prime_table(static_cast<std::uint32_t>(std::min<u64>(budget.trial_bound, 1u << 30)));
    const u64 bound = std::min<u64>(budget.trial_bound, table->back());
    BigInt m = n;
    bool exhausted_by_sqrt = false;

    auto trial = [&](auto& value) {
        using V = std::decay_t<decltype(value)>;
        for (std::uint32_t p : *table) {
            if (p > bound) break;
            if (static_cast<V>(p) * p > value) {
                exhausted_by_sqrt = true;
                break;
            }
            if (value % p != 0) continue;
            unsigned e = 0;
            do {
                value /= p;
                ++e;
            } while (value % p == 0);
            factors[BigInt(p)] = e;
        }
    };

    if (m <= kU64Max) {
        u64 v = static_cast<u64>(m);
        trial(v);
        m = v;
    } else if (m < kU127Limit) {
        u128 v = to_u128(m);
        trial(v);
        m = from_u128(v);
    } else {
        trial(m);
    }

    if (m > 1) {
        if (exhausted_by_sqrt || m <= BigInt(bound) * bound) {
            ++factors[m];
        } else {
            factor_cofactor(m, budget, factors);
        }
    }
    return FactoredInteger::from_factors(std::move(factors));
}

unsigned valuation(const BigInt& n, const BigInt& p)
{
    if (n < 1 || p < 2) throw Error(ErrorKind::InvalidArgument, "valuation: need n >= 1 and p >= 2");
    unsigned k = 0;
    BigInt m = n;
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    return k;
}

unsigned valuation(u64 n, u64 p)
{
    if (n < 1 || p < 2) throw Error(ErrorKind::InvalidArgument, "valuation: need n >= 1 and p >= 2");
    unsigned k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

} // namespace sumsq::arith
