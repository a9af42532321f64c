#include "sumsq/arith.hpp"
#include "sumsq/error.hpp"

#include <set>

namespace sumsq::arith {

namespace {

struct Gaussian {
    BigInt re;
    BigInt im;

    Gaussian operator*(const Gaussian& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Gaussian conj() const { return {re, -im}; }
};

Gaussian gpow(Gaussian base, unsigned e)
{
    Gaussian r{1, 0};
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

// p = x^2 + y^2 for a prime p = 1 (mod 4), via a square root of -1 and the
// Hermite-Serret Euclidean descent.
Gaussian split_prime(const BigInt& p)
{
    BigInt c = 2;
    const BigInt half = (p - 1) / 2;
    while (boost::multiprecision::powm(c, half, p) != p - 1) ++c;
    BigInt r = boost::multiprecision::powm(c, (p - 1) / 4, p);
    BigInt a = p, b = r;
    while (b * b > p) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    BigInt y;
    if (!is_square(p - b * b, &y)) {
        throw Error(ErrorKind::InternalInconsistency, "prime " + p.str() + " did not split as a sum of two squares");
    }
    return {b, y};
}

} // namespace

TwoSquares canonical_pair(const BigInt& x, const BigInt& y)
{
    BigInt ax = abs(x), ay = abs(y);
    if (ax > ay) std::swap(ax, ay);
    return {ax, ay};
}

bool is_sum_two_squares(const FactoredInteger& n)
{
    if (n.is_zero()) return true;
    for (const auto& [p, e] : n.factors()) {
        if (p % 4 == 3 && e % 2 != 0) return false;
    }
    return true;
}

std::vector<TwoSquares> all_two_square_reps(const FactoredInteger& n, std::size_t max_combinations)
{
    if (n.is_zero()) return {{0, 0}};
    if (!is_sum_two_squares(n)) return {};

    Gaussian base{1, 0};
    std::vector<std::pair<Gaussian, unsigned>> split;
    std::size_t combinations = 1;
    bool capped = false;
    for (const auto& [p, e] : n.factors()) {
        if (p == 2) {
            base = base * gpow({1, 1}, e);
        } else if (p % 4 == 3) {
            BigInt s = boost::multiprecision::pow(p, e / 2);
            base = base * Gaussian{s, 0};
        } else {
            split.emplace_back(split_prime(p), e);
            if (combinations > max_combinations / (e + 1)) capped = true;
            combinations *= (e + 1);
        }
    }

    std::set<TwoSquares> reps;
    if (capped) {
        Gaussian z = base;
        for (const auto& [pi, e] : split) z = z * gpow(pi, e);
        reps.insert(canonical_pair(z.re, z.im));
    } else {
        // Each prime above splits as pi * conj(pi); choosing how many of the
        // e copies use pi enumerates every Gaussian divisor of norm n.
        std::vector<std::vector<Gaussian>> choices;
        for (const auto& [pi, e] : split) {
            std::vector<Gaussian> opts;
            for (unsigned j = 0; j <= e; ++j) opts.push_back(gpow(pi, j) * gpow(pi.conj(), e - j));
            choices.push_back(std::move(opts));
        }
        std::vector<std::size_t> idx(choices.size(), 0);
        while (true) {
            Gaussian z = base;
            for (std::size_t i = 0; i < choices.size(); ++i) z = z * choices[i][idx[i]];
            reps.insert(canonical_pair(z.re, z.im));
            std::size_t i = 0;
            while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
            if (i == idx.size()) break;
        }
    }

    for (const auto& r : reps) {
        if (r.x * r.x + r.y * r.y != n.value()) {
            throw Error(ErrorKind::InternalInconsistency, "two-square representation failed to verify");
        }
    }
    return {reps.begin(), reps.end()};
}

std::optional<TwoSquares> represent_two_squares(const FactoredInteger& n)
{
    auto reps = all_two_square_reps(n);
    if (reps.empty()) return std::nullopt;
    return reps.front();
}

} // namespace sumsq::arith
