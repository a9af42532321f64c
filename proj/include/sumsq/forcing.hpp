#pragma once

// CRT constructions that force consecutiveness: a modulus and class in which
// every integer strictly between the members of a triple is divisible exactly
// once by a prime = 3 (mod 4), plus the tuple scaffolding (constant Delta,
// bin sizes, two-class offset tuples, gap blocking).

#include "sumsq/arith.hpp"
#include "sumsq/census.hpp"
#include "sumsq/witness.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sumsq::forcing {

using arith::BigInt;
using arith::FactoredInteger;
using arith::ResidueClass;
using arith::u64;

/// sqrt(2)(pi + 2)/(32 pi) * (1 + theta1)/sqrt(theta1 theta2). Throws
/// DomainError unless theta1, theta2 > 0 and theta1 + theta2 < 1/18.
double delta_constant(double theta1, double theta2);

/// Minimal bin sizes: ceil(2 Delta^3), then 2^(7i) + 1 for i = 2..M.
std::vector<BigInt> bin_plan(unsigned M, double theta1, double theta2);

struct TupleOptions {
    u64 residue_mod4 = 1;            // every offset h_i = residue_mod4 (mod 4)
    u64 offset_cap = u64{1} << 40;   // largest offset the greedy scan may reach
    u64 max_offsets = u64{1} << 16;  // total tuple length accepted
};

struct TupleDesign {
    u64 q = 1;
    u64 a = 0, b = 0;
    unsigned j = 1;                 // bins 1..j use class a, the rest class b
    std::vector<u64> bins;          // sizes
    std::vector<u64> offsets;       // h_1 < ... < h_k
    u64 residue_mod4 = 1;
    std::optional<double> theta1, theta2;
};

/// Greedy ascending offsets meeting the class and mod-4 conditions while
/// keeping the forms q*x + h_i admissible. q must be odd with (a, q) = (b, q) = 1.
TupleDesign construct_two_class_tuple(const FactoredInteger& q, u64 a, u64 b, unsigned j, std::span<const u64> sizes,
                                      const TupleOptions& options = {});

/// Prime-tuple condition: for every prime p some n mod p avoids every root
/// of prod (g n + h_i).
bool linear_forms_admissible(u64 g, std::span<const u64> offsets);

/// Named checks of every TupleDesign invariant.
std::vector<std::pair<std::string, bool>> verify_tuple(const TupleDesign& design);

struct GapBlocking {
    FactoredInteger Q;
    BigInt a;                                  // class mod Q
    std::vector<std::pair<u64, u64>> blocks;   // (t, q_t), ascending t
};

/// For each t strictly between h_1 and h_k that is not an offset, a distinct
/// prime q_t = 3 (mod 4) with g a + t = q_t (mod q_t^2).
GapBlocking gap_blocking(u64 g, std::span<const u64> offsets);

std::vector<std::pair<std::string, bool>> verify_gap_blocking(u64 g, std::span<const u64> offsets,
                                                              const GapBlocking& gb);

struct BlockingSystem {
    FactoredInteger q;
    u64 a = 0, b = 0, c = 0;
    BigInt a2, b2, c2;  // admissible mod q^2
    BigInt a3, b3, c3;  // admissible mod 4q^2, in (0, q^2] unless widened
    bool window_widened = false;
    u64 h = 0, k = 0;
    std::map<u64, BigInt> blocking_primes;  // i -> p_i for 1 <= i < k, i != h
    FactoredInteger T;                      // 4 q^2 prod p_i^2
    ResidueClass a_T;
};

/// Requires a, b, c admissible mod q (HypothesisViolation otherwise). Throws
/// LiftWindowEmpty when no lift exists even in the widened window, and
/// InternalInconsistency when the verification below fails.
BlockingSystem build_blocking_system(const FactoredInteger& q, u64 a, u64 b, u64 c);

/// Every invariant group, with exact arithmetic on the retained factorization.
std::vector<std::pair<std::string, bool>> verify_blocking_system(const BlockingSystem& s);

struct TripleOptions {
    census::CensusOptions census;
    witness::ScanOptions scan;
    bool build_family = false;  // also construct the witness family mod T
};

struct TripleReport {
    BlockingSystem system;
    census::Occurrence occurrence;
    witness::TripleCertificate certificate;
    std::optional<witness::WitnessFamily> family;
};

/// Blocking system plus the first consecutive triple in E matching [a, b, c]
/// with E_n <= x_budget. Throws NoneFoundWithinBudget otherwise.
TripleReport end_to_end_triple(const FactoredInteger& q, u64 a, u64 b, u64 c, u64 x_budget,
                               const TripleOptions& options = {});

} // namespace sumsq::forcing
