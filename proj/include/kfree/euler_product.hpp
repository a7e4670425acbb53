#pragma once
#include "kfree/local_density.hpp"

// Rigorous enclosures of the leading constants
//   c_f  = prod_p (1 - rho(p^k)/p^{2k})
//   c'_f = prod_p (1 - rho'(p^k)/phi(p^k)^2)
// as a finite product over p <= cutoff, accumulated with directed rounding,
// times a certified tail enclosure [1 - T, 1] with
//   T = 2 * cutoff^{1-k} / (k-1)
//      >= sum_{p > cutoff} -log(1 - factor deficit).
// The tail constant 2 is valid because -log(1-x) <= x + x^2 <= 2x for
// x <= 1/2 and, past the cutoff, the deficit is at most (p-1)/p^{k+1} < p^-k
// (plain) or 1/phi(p^k) < 2*p^-k (coprime); primes with p^k | C are forced
// below the cutoff.

namespace kfree {

enum class ProductVariant { Plain, Coprime };

struct ProductBracket {
    double lower = 0.0;
    double upper = 1.0;
    u64 prime_cutoff = 0;
    double tail_bound = 0.0;
    ProductVariant variant = ProductVariant::Plain;

    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

struct EulerOptions {
    u64 max_cutoff = u64{1} << 27;
};

// Bracket from the finite product over p <= cutoff plus the tail bound.
// cutoff must be >= 3 and >= every prime p with p^k | C.
ProductBracket constant_at_cutoff(const PolySpec& spec, u64 cutoff, ProductVariant variant);

// Enclosure of width <= precision (>= 1e-14) for c_f.  Picks the smallest
// power-of-two-ish cutoff whose tail bound fits the budget; fails if that
// cutoff exceeds opts.max_cutoff or the accumulation noise floor exceeds the
// requested width.
ProductBracket leading_constant(const PolySpec& spec, double precision,
                                const EulerOptions& opts = {});

// Same for the coprime-variant constant c'_f.
ProductBracket leading_constant_coprime(const PolySpec& spec, double precision,
                                        const EulerOptions& opts = {});

// The three truncation sums of the main-term analysis, over squarefree
// d <= z1 (the only terms a Moebius weight keeps):
//   mobius_weighted = sum mu(d) rho(d^k) / d^{2k}
//   over_dk         = sum rho(d^k) / d^k
//   raw             = sum rho(d^k)
struct TruncationSums {
    u64 z1 = 0;
    double mobius_weighted = 0.0;
    double over_dk = 0.0;
    double raw = 0.0;
};
TruncationSums truncation_diagnostics(const PolySpec& spec, u64 z1);

} // namespace kfree
