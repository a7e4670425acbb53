#include "kfree/box_counting.hpp"

#include <algorithm>
#include <cmath>

#include "kfree/errors.hpp"

namespace kfree {

namespace {

u64 abs_u64(i64 v) { return v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v); }

i64 checked_pow_i64(u64 base, int exp) {
    u64 r = checked_pow(base, exp);
    if (r > static_cast<u64>(INT64_MAX)) throw std::overflow_error("power exceeds i64");
    return static_cast<i64>(r);
}

// (-C) mod m, in [0, m)
u64 neg_c_mod(i64 c, u64 m) {
    i64 r = (-c) % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

// value range of f over [1,H]^2: monotone in x and y, extremes at corners
struct ValueRange {
    i64 vmin, vmax; // f(1,1), f(H,H)
    u64 abs_lo, abs_hi;
};

ValueRange value_range(const PolySpec& spec, u64 h) {
    i64 hk = checked_pow_i64(h, spec.k);
    i64 vmax = checked_add(checked_mul(static_cast<i64>(h), hk), spec.c);
    i64 vmin = checked_add(i64{1}, spec.c);
    u64 abs_hi = std::max(abs_u64(vmin), abs_u64(vmax));
    return {vmin, vmax, 1, std::max<u64>(abs_hi, 1)};
}

template <typename Judge>
u64 count_over_box(const PolySpec& spec, u64 h, BoxRestriction restriction, Judge judge) {
    std::vector<u64> xs;
    if (restriction == BoxRestriction::PrimesOnly) {
        if (h < 2) return 0;
        xs = primes_up_to(h).primes();
    } else {
        xs.resize(h);
        for (u64 i = 0; i < h; ++i) xs[i] = i + 1;
    }
    u64 total = 0;
    for (u64 y : xs) {
        i64 stride = checked_pow_i64(y, spec.k);
        for (u64 x : xs) {
            i64 v = checked_add(checked_mul(static_cast<i64>(x), stride), spec.c);
            if (v == 0) continue;
            if (judge(abs_u64(v))) ++total;
        }
    }
    return total;
}

void fill_main_term(BoxCount& bc, const ProductBracket& bracket, u64 scale) {
    double n2 = static_cast<double>(scale) * static_cast<double>(scale);
    bc.main_lower = bracket.lower * n2;
    bc.main_upper = bracket.upper * n2;
    bc.main_term = bracket.midpoint() * n2;
    bc.relative_deviation =
        bc.main_term > 0 ? std::abs(static_cast<double>(bc.count) - bc.main_term) / bc.main_term
                         : 0.0;
}

BoxCount count_impl(const PolySpec& spec, u64 h, BoxRestriction restriction,
                    const BoxOptions& opts) {
    if (h < 1) throw std::invalid_argument("count box: H must be >= 1");
    BoxCount bc{spec};
    bc.h = h;
    bc.restriction = restriction;

    ValueRange vr = value_range(spec, h);

    CountMethod method = opts.method;
    if (method == CountMethod::Auto) {
        if (opts.table != nullptr || vr.abs_hi <= opts.sieve_budget)
            method = CountMethod::SieveTable;
        else if (h <= 200)
            method = CountMethod::Factorize;
        else
            throw budget_error("count box sieve budget (H^{k+1}+|C|)", vr.abs_hi,
                               opts.sieve_budget);
    }

    if (method == CountMethod::SieveTable) {
        const KfreeTable* table = opts.table;
        KfreeTable own;
        if (table == nullptr) {
            if (vr.abs_hi > opts.sieve_budget)
                throw budget_error("count box sieve budget (H^{k+1}+|C|)", vr.abs_hi,
                                   opts.sieve_budget);
            SieveOptions so;
            so.threads = opts.threads;
            so.max_entries = opts.sieve_budget;
            u64 lo = vr.vmin >= 1 ? static_cast<u64>(vr.vmin) : 1;
            own = kfree_flags(lo, vr.abs_hi, spec.k, so);
            table = &own;
        } else {
            if (table->k() != spec.k)
                throw std::invalid_argument("count box: table k mismatch");
            u64 lo_needed = vr.vmin >= 1 ? static_cast<u64>(vr.vmin) : 1;
            if (table->lo() > lo_needed || table->hi() < vr.abs_hi)
                throw std::invalid_argument("count box: table does not cover the value range");
        }
        bc.count = count_over_box(spec, h, restriction, [&](u64 a) { return table->test(a); });
    } else {
        if (h > 200) throw budget_error("count box factorization path H", h, 200);
        bc.count =
            count_over_box(spec, h, restriction, [&](u64 a) { return is_kfree(static_cast<i64>(a), spec.k); });
    }

    if (restriction == BoxRestriction::AllIntegers) {
        fill_main_term(bc, leading_constant(spec, opts.constant_precision), h);
    } else {
        u64 pi_h = h < 2 ? 0 : primes_up_to(h).count_up_to(h);
        fill_main_term(bc, leading_constant_coprime(spec, opts.constant_precision), pi_h);
    }
    return bc;
}

} // namespace

BoxCount count_kfree_values(const PolySpec& spec, u64 h, const BoxOptions& opts) {
    return count_impl(spec, h, BoxRestriction::AllIntegers, opts);
}

BoxCount count_kfree_prime_values(const PolySpec& spec, u64 h, const BoxOptions& opts) {
    return count_impl(spec, h, BoxRestriction::PrimesOnly, opts);
}

u64 count_zero_pairs(const PolySpec& spec, u64 h) {
    if (spec.c > 0) return 0; // x*y^k >= 1
    u64 target = abs_u64(spec.c); // x*y^k = -C
    u64 zeros = 0;
    for (u64 y = 1; y <= h; ++y) {
        u64 yk;
        try {
            yk = checked_pow(y, spec.k);
        } catch (const std::overflow_error&) {
            break;
        }
        if (yk > target) break;
        if (target % yk == 0 && target / yk <= h) ++zeros;
    }
    return zeros;
}

u64 count_congruent_pairs(const PolySpec& spec, Modulus m, u64 h) {
    if (h < 1) throw std::invalid_argument("count_congruent_pairs: H must be >= 1");
    const u64 mod = m.value();
    const u64 zeros = count_zero_pairs(spec, h);
    if (mod == 1) return h * h - zeros;

    const u64 t = neg_c_mod(spec.c, mod);

    auto solutions_in_x = [&](u64 nu) -> u64 {
        u64 w = mod_pow(nu, static_cast<u64>(spec.k), m);
        u64 g = w == 0 ? mod : gcd(static_cast<i64>(w), static_cast<i64>(mod));
        if (t % g != 0) return 0;
        u64 m2 = mod / g;
        if (m2 == 1) return h; // every x solves it
        u64 w2 = (w / g) % m2;
        u64 x0 = mul_mod((t / g) % m2, *mod_inverse(w2, Modulus(m2)), m2);
        return count_in_progression(x0, Modulus(m2), h);
    };

    u64 total = 0;
    if (h < mod) {
        for (u64 y = 1; y <= h; ++y) total += solutions_in_x(y);
    } else {
        for (u64 nu = 0; nu < mod; ++nu) {
            u64 weight = count_in_progression(nu, m, h); // y's in this class
            if (weight == 0) continue;
            u64 sols = solutions_in_x(nu);
            if (sols != 0) total += weight * sols;
        }
    }
    return total - zeros;
}

u64 max_mobius_cutoff(const PolySpec& spec, u64 h) {
    ValueRange vr = value_range(spec, h);
    u64 max_abs = std::max(abs_u64(vr.vmin), abs_u64(vr.vmax));
    return nth_root_floor(max_abs, spec.k);
}

i64 mobius_truncated_count(const PolySpec& spec, u64 h, u64 z) {
    if (z == 0) return 0;
    const auto mob = mobius_up_to(z);
    i64 total = 0;
    for (u64 d = 1; d <= z; ++d) {
        int mu = mob[d];
        if (mu == 0) continue;
        u64 dk = checked_pow(d, spec.k);
        u64 s = count_congruent_pairs(spec, Modulus(dk), h);
        total = checked_add(total, mu * static_cast<i64>(s));
    }
    return total;
}

} // namespace kfree
