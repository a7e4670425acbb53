#include "kfree/dioph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kfree/errors.hpp"

namespace kfree {

namespace {

constexpr u64 kIntervalBudget = 10'000'000;  // combined box sizes
constexpr u64 kPairBudget = 200'000'000;     // build + probe pairs

// snap near-integers produced by pow/division noise
bool near_integer(double x, double* snapped) {
    double r = std::nearbyint(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
        *snapped = r;
        return true;
    }
    return false;
}

// u^l * d^k as i128 with range validation
i128 pow_product(u64 u, int l, u64 d, int k) {
    u128 acc = 1;
    auto mul_checked = [&](u64 b) {
        if (acc > (u128{1} << 126) / b) throw std::overflow_error("dioph: u^l d^k exceeds 128-bit range");
        acc *= b;
    };
    for (int i = 0; i < l; ++i) mul_checked(u);
    for (int i = 0; i < k; ++i) mul_checked(d);
    return static_cast<i128>(acc);
}

struct I128Hash {
    size_t operator()(i128 v) const {
        u128 u = static_cast<u128>(v);
        u64 lo = static_cast<u64>(u), hi = static_cast<u64>(u >> 64);
        u64 x = lo ^ (hi * 0x9E3779B97F4A7C15ull);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        return static_cast<size_t>(x);
    }
};

IntRange clamp_positive(IntRange r) {
    if (r.lo < 1) r.lo = 1;
    return r;
}

bool pow_fits_u64(u64 base, int exp, u64* out) {
    u64 acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && acc > UINT64_MAX / base) return false;
        acc *= base;
    }
    *out = acc;
    return true;
}

} // namespace

IntRange open_dyadic_integers(double x) {
    if (!(x > 0)) return {1, 0};
    double snapped;
    i64 first, last;
    if (near_integer(x, &snapped))
        first = static_cast<i64>(snapped) + 1;
    else
        first = static_cast<i64>(std::floor(x)) + 1;
    double two = 2 * x;
    if (near_integer(two, &snapped))
        last = static_cast<i64>(snapped) - 1;
    else
        last = static_cast<i64>(std::ceil(two)) - 1;
    if (first < 1) first = 1;
    return {first, last};
}

std::vector<IntRange> dyadic_partition(i64 lo, i64 hi) {
    if (lo < 1) throw std::invalid_argument("dyadic_partition: lo must be >= 1");
    std::vector<IntRange> pieces;
    for (i64 c = lo; c <= hi; c = 2 * c) pieces.push_back({c, std::min(2 * c - 1, hi)});
    return pieces;
}

double DyadicInstance::u_box() const {
    return std::pow(z, 1.0 / eq.l) / std::pow(d_box, static_cast<double>(eq.k) / eq.l);
}

double DyadicInstance::v_box() const {
    return std::pow(z, 1.0 / eq.l) / std::pow(e_box, static_cast<double>(eq.k) / eq.l);
}

u64 count_box_solutions(const EquationForm& eq, IntRange dbox, IntRange ebox, IntRange ubox,
                        IntRange vbox) {
    dbox = clamp_positive(dbox);
    ebox = clamp_positive(ebox);
    ubox = clamp_positive(ubox);
    vbox = clamp_positive(vbox);
    if (dbox.empty() || ebox.empty() || ubox.empty() || vbox.empty()) return 0;

    u64 combined = dbox.size() + ebox.size() + ubox.size() + vbox.size();
    if (combined > kIntervalBudget)
        throw budget_error("count_box_solutions combined interval size", combined, kIntervalBudget);
    u64 build_pairs = ubox.size() * dbox.size();
    u64 probe_pairs = vbox.size() * ebox.size();
    if (build_pairs > kPairBudget || probe_pairs > kPairBudget)
        throw budget_error("count_box_solutions pair count", std::max(build_pairs, probe_pairs),
                           kPairBudget);

    std::unordered_map<i128, u64, I128Hash> targets;
    targets.reserve(static_cast<size_t>(build_pairs));
    for (i64 u = ubox.lo; u <= ubox.hi; ++u)
        for (i64 d = dbox.lo; d <= dbox.hi; ++d)
            ++targets[pow_product(static_cast<u64>(u), eq.l, static_cast<u64>(d), eq.k) + eq.h];

    u64 total = 0;
    for (i64 v = vbox.lo; v <= vbox.hi; ++v)
        for (i64 e = ebox.lo; e <= ebox.hi; ++e) {
            auto it = targets.find(pow_product(static_cast<u64>(v), eq.l, static_cast<u64>(e), eq.k));
            if (it != targets.end()) total += it->second;
        }
    return total;
}

u64 count_dyadic_solutions(const DyadicInstance& inst) {
    return count_box_solutions(inst.eq, open_dyadic_integers(inst.d_box),
                               open_dyadic_integers(inst.e_box),
                               open_dyadic_integers(inst.u_box()),
                               open_dyadic_integers(inst.v_box()));
}

ReussBound reuss_bound(const DyadicInstance& inst, double epsilon) {
    if (!(epsilon > 0)) throw std::invalid_argument("reuss_bound: epsilon must be positive");
    const double de = inst.d_box * inst.e_box;
    const double uv = inst.u_box() * inst.v_box();
    const double log_z = std::log(inst.z);

    ReussBound rb;
    rb.log_ratio_de = std::log(de) / log_z;
    rb.log_ratio_uv = std::log(uv) / log_z;
    rb.m = std::exp((9.0 / 8.0) * std::log(de) * std::log(uv) / log_z);

    const double zeps = std::pow(inst.z, epsilon);
    rb.bound_de = zeps * (std::sqrt(de * rb.m) + inst.d_box + inst.e_box);
    rb.bound_uv = zeps * (std::sqrt(uv * rb.m) + inst.u_box() + inst.v_box());
    rb.bound = std::min(rb.bound_de, rb.bound_uv);

    auto in_window = [](double r) { return r >= 0.25 && r <= 4.0; };
    rb.ratios_ok = in_window(rb.log_ratio_de) && in_window(rb.log_ratio_uv);
    rb.size_ok = inst.eq.l >= 2 || de >= std::pow(inst.z, 1.0 / inst.eq.k);
    return rb;
}

std::vector<EquationSolution> enumerate_equation_solutions(const PolySpec& spec, IntRange xr,
                                                           IntRange yr, IntRange dr) {
    xr = clamp_positive(xr);
    yr = clamp_positive(yr);
    dr = clamp_positive(dr);
    std::vector<EquationSolution> out;
    if (xr.empty() || yr.empty() || dr.empty()) return out;

    if (xr.size() > kIntervalBudget || yr.size() > kIntervalBudget)
        throw budget_error("enumerate_equation_solutions range size",
                           std::max(xr.size(), yr.size()), kIntervalBudget);
    u64 pairs = xr.size() * yr.size();
    if (pairs > kIntervalBudget)
        throw budget_error("enumerate_equation_solutions candidate pairs", pairs, kIntervalBudget);
    if (dr.size() > kPairBudget / std::max<u64>(pairs, 1))
        throw budget_error("enumerate_equation_solutions candidate triples", dr.size(),
                           kPairBudget / std::max<u64>(pairs, 1));

    for (i64 y = yr.lo; y <= yr.hi; ++y) {
        i64 yk = static_cast<i64>(checked_pow(static_cast<u64>(y), spec.k));
        for (i64 x = xr.lo; x <= xr.hi; ++x) {
            i64 v = checked_add(checked_mul(x, yk), spec.c);
            if (v < 1) continue; // a >= 1 requires a positive value
            for (i64 d = dr.lo; d <= dr.hi; ++d) {
                u64 dk;
                if (!pow_fits_u64(static_cast<u64>(d), spec.k, &dk) ||
                    dk > static_cast<u64>(v))
                    break; // d ascending, d^k only grows
                if (static_cast<u64>(v) % dk == 0)
                    out.push_back({x, y, v / static_cast<i64>(dk), d});
            }
        }
    }
    return out;
}

} // namespace kfree
