#include "kfree/euler_product.hpp"

#include <cmath>
#include <limits>

#include "kfree/errors.hpp"
#include "kfree/sieves.hpp"

namespace kfree {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

long double step_down(long double x, int n = 1) {
    for (int i = 0; i < n; ++i) x = std::nextafterl(x, -kInf);
    return x;
}
long double step_up(long double x, int n = 1) {
    for (int i = 0; i < n; ++i) x = std::nextafterl(x, kInf);
    return x;
}

long double to_ld(u128 v) {
    return static_cast<long double>(static_cast<u64>(v >> 64)) * 18446744073709551616.0L +
           static_cast<long double>(static_cast<u64>(v));
}

// [lo, up] containing num/den exactly; three roundings, widened by 3 ulps.
struct Ratio {
    long double lo, up;
};
Ratio ratio_bracket(u128 num, u128 den) {
    long double q = to_ld(num) / to_ld(den);
    return {step_down(q, 3), step_up(q, 3)};
}

// bracket of an Euler factor 1 - x given a bracket of x in [0, 1)
Ratio one_minus(Ratio x) {
    return {step_down(1.0L - x.up), step_up(1.0L - x.lo)};
}

bool pow_fits_u128(u64 base, int exp, u128* out) {
    u128 acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (acc > (~u128{0}) / base) return false;
        acc *= base;
    }
    *out = acc;
    return true;
}

// Exact factor 1 - rho(p^k)/p^{2k}.  After cancelling p^{k-1} this is
// 1 - (p-1)/p^{k+1} - [p^k | C]/p, a rational with denominator p^{k+1}.
Ratio plain_factor(const PolySpec& spec, u64 p, bool pk_divides_c) {
    u128 den;
    if (!pow_fits_u128(p, spec.k + 1, &den)) {
        // x < 2^-119: factor is 1 up to noise
        return {step_down(1.0L, 2), 1.0L};
    }
    u128 num = den - (p - 1);
    if (pk_divides_c) num -= den / p; // subtract p^k
    return ratio_bracket(num, den);
}

// Exact factor of the coprime variant: 1 at p | C, else 1 - 1/phi(p^k).
Ratio coprime_factor(const PolySpec& spec, u64 p, bool p_divides_c) {
    if (p_divides_c) return {1.0L, 1.0L};
    u128 phi;
    if (!pow_fits_u128(p, spec.k - 1, &phi)) return {step_down(1.0L, 2), 1.0L};
    if (phi > (~u128{0}) / p) return {step_down(1.0L, 2), 1.0L};
    phi *= (p - 1);
    return one_minus(ratio_bracket(1, phi));
}

// largest prime whose k-th power divides C (0 if none); these primes must
// sit below any cutoff so the tail bound only sees the generic factor shape
u64 max_forced_prime(const PolySpec& spec, ProductVariant variant) {
    u64 a = spec.c < 0 ? static_cast<u64>(-(spec.c + 1)) + 1 : static_cast<u64>(spec.c);
    u64 worst = 0;
    for (const auto& [p, e] : factorize(a).factors) {
        bool forced = variant == ProductVariant::Plain ? e >= spec.k : e >= 1;
        if (forced) worst = std::max(worst, p);
    }
    return worst;
}

// upper bound of the tail exponent T = 2 P^{1-k} / (k-1)
long double tail_bound_at(u64 cutoff, int k) {
    u128 den;
    if (!pow_fits_u128(cutoff, k - 1, &den) || den > (~u128{0}) / static_cast<u64>(k - 1))
        return ldexpl(1.0L, -100);
    den *= static_cast<u64>(k - 1);
    return step_up(2.0L / to_ld(den), 3);
}

} // namespace

ProductBracket constant_at_cutoff(const PolySpec& spec, u64 cutoff, ProductVariant variant) {
    if (cutoff < 3) throw std::invalid_argument("constant_at_cutoff: cutoff must be >= 3");
    const u64 forced = max_forced_prime(spec, variant);
    if (variant == ProductVariant::Plain && cutoff < forced)
        throw std::invalid_argument("constant_at_cutoff: cutoff must be >= " +
                                    std::to_string(forced) + " so all primes with p^k | C are in the finite part");

    const auto& cert = certify_closed_form(spec);
    if (!cert.ok)
        throw std::logic_error("closed-form local densities failed certification: " + cert.detail);

    const auto primes = primes_up_to(cutoff).primes();
    const u64 c_abs = spec.c < 0 ? static_cast<u64>(-(spec.c + 1)) + 1 : static_cast<u64>(spec.c);

    long double lo = 1.0L, up = 1.0L;
    for (u64 p : primes) {
        u128 pk;
        bool pk_div_c = pow_fits_u128(p, spec.k, &pk) && pk <= c_abs &&
                        c_abs % static_cast<u64>(pk) == 0;
        Ratio f = variant == ProductVariant::Plain ? plain_factor(spec, p, pk_div_c)
                                                   : coprime_factor(spec, p, c_abs % p == 0);
        if (f.lo == 1.0L && f.up == 1.0L) continue;
        lo = step_down(lo * f.lo);
        up = step_up(up * f.up);
    }

    const long double t = tail_bound_at(cutoff, spec.k);
    // exp(-T) >= 1 - T, so [lo*(1-T), up] encloses the full product
    long double tail_lo = step_down(1.0L - t);
    long double lower = step_down(lo * tail_lo);

    ProductBracket b;
    b.lower = static_cast<double>(step_down(lower, 2));
    b.upper = static_cast<double>(step_up(up, 2));
    if (b.upper > 1.0) b.upper = 1.0;
    b.prime_cutoff = cutoff;
    b.tail_bound = static_cast<double>(step_up(t, 2));
    b.variant = variant;
    return b;
}

namespace {

ProductBracket constant_with_precision(const PolySpec& spec, double precision,
                                       const EulerOptions& opts, ProductVariant variant) {
    if (!(precision >= 1e-14))
        throw std::invalid_argument("leading_constant: precision must be >= 1e-14");

    u64 cutoff = std::max<u64>(16, max_forced_prime(spec, variant));
    while (static_cast<double>(tail_bound_at(cutoff, spec.k)) > precision / 2) {
        if (cutoff > opts.max_cutoff / 2)
            throw budget_error("leading_constant prime cutoff for precision " +
                                   std::to_string(precision),
                               cutoff * 2, opts.max_cutoff);
        cutoff *= 2;
    }

    ProductBracket b = constant_at_cutoff(spec, cutoff, variant);
    if (b.width() > precision)
        throw budget_error("leading_constant: accumulation noise floor " +
                           std::to_string(b.width()) + " exceeds requested precision " +
                           std::to_string(precision));
    return b;
}

} // namespace

ProductBracket leading_constant(const PolySpec& spec, double precision, const EulerOptions& opts) {
    return constant_with_precision(spec, precision, opts, ProductVariant::Plain);
}

ProductBracket leading_constant_coprime(const PolySpec& spec, double precision,
                                        const EulerOptions& opts) {
    return constant_with_precision(spec, precision, opts, ProductVariant::Coprime);
}

TruncationSums truncation_diagnostics(const PolySpec& spec, u64 z1) {
    constexpr u64 kZBudget = 100'000;
    if (z1 < 1) throw std::invalid_argument("truncation_diagnostics: z1 must be >= 1");
    if (z1 > kZBudget) throw budget_error("truncation_diagnostics z1", z1, kZBudget);

    const auto mob = mobius_up_to(z1);
    TruncationSums sums;
    sums.z1 = z1;
    long double s_weighted = 0.0L, s_dk = 0.0L, s_raw = 0.0L;

    for (u64 d = 1; d <= z1; ++d) {
        int mu = mob[d];
        if (mu == 0) continue; // squarefree d only, as in the Moebius-weighted sums
        long double ratio_2k = 1.0L, ratio_k = 1.0L, raw = 1.0L;
        for (const auto& [p, e] : factorize(d).factors) {
            (void)e;
            long double rho = static_cast<long double>(density_prime_power(spec, p, spec.k).value);
            long double pk = static_cast<long double>(checked_pow(p, spec.k));
            ratio_2k *= rho / pk / pk;
            ratio_k *= rho / pk;
            raw *= rho;
        }
        s_weighted += mu * ratio_2k;
        s_dk += ratio_k;
        s_raw += raw;
    }
    sums.mobius_weighted = static_cast<double>(s_weighted);
    sums.over_dk = static_cast<double>(s_dk);
    sums.raw = static_cast<double>(s_raw);
    return sums;
}

} // namespace kfree
