#pragma once
#include "kfree/euler_product.hpp"
#include "kfree/sieves.hpp"

// Exact counts over boxes: the number of k-free values of x*y^k + C for
// 1 <= x,y <= H (all integers or primes only), the congruence counts
// S(m,H), and the truncated Moebius main term.

namespace kfree {

enum class BoxRestriction { AllIntegers, PrimesOnly };
enum class CountMethod { Auto, SieveTable, Factorize };

struct BoxCount {
    PolySpec spec;
    u64 h = 1;
    BoxRestriction restriction = BoxRestriction::AllIntegers;
    u64 count = 0;
    double main_term = 0.0;  // midpoint of the constant bracket times H^2 (or pi(H)^2)
    double main_lower = 0.0;
    double main_upper = 0.0;
    double relative_deviation = 0.0; // |count - main_term| / main_term
};

struct BoxOptions {
    CountMethod method = CountMethod::Auto;
    u64 sieve_budget = u64{1} << 31;
    double constant_precision = 1e-6;
    const KfreeTable* table = nullptr; // reuse a prebuilt table covering the value range
    unsigned threads = 1;              // forwarded to the sieve build
};

// Count of (x, y) in [1,H]^2 with x*y^k + C k-free.  Zero values are never
// k-free; negative values are judged by absolute value.  The sieve path and
// the per-value factorization path agree wherever both are in budget.
BoxCount count_kfree_values(const PolySpec& spec, u64 h, const BoxOptions& opts = {});

// Same count over prime pairs (p, q) in [2,H]^2; main term uses the coprime
// constant and pi(H)^2.
BoxCount count_kfree_prime_values(const PolySpec& spec, u64 h, const BoxOptions& opts = {});

// S(m,H): number of (x, y) in [1,H]^2 with x*y^k + C == 0 (mod m) and
// x*y^k + C != 0.  Loop-free in x: for each residue class of y the solvable
// x form one class mod m/gcd(y^k, m), counted by count_in_progression.
// Excluding the (finitely many) zero pairs keeps the truncated Moebius sum
// an exact identity for negative C.
u64 count_congruent_pairs(const PolySpec& spec, Modulus m, u64 h);

// Values x*y^k + C in the box that are exactly zero (only possible for
// C < 0); these satisfy every congruence and are excluded from the counts.
u64 count_zero_pairs(const PolySpec& spec, u64 h);

// sum_{d <= z} mu(d) * count_congruent_pairs(d^k, H).  With z =
// max_mobius_cutoff this equals count_kfree_values exactly.
i64 mobius_truncated_count(const PolySpec& spec, u64 h, u64 z);

// floor(max |f| ^ (1/k)) over the box: the smallest cutoff for which the
// Moebius identity is complete.
u64 max_mobius_cutoff(const PolySpec& spec, u64 h);

} // namespace kfree
