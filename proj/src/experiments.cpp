#include "kfree/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "kfree/errors.hpp"

namespace kfree {

std::vector<ScalingRow> run_scaling(const PolySpec& spec, std::span<const u64> h_values,
                                    BoxRestriction restriction, const BoxOptions& opts) {
    std::vector<ScalingRow> rows;
    if (h_values.empty()) return rows;
    if (!std::is_sorted(h_values.begin(), h_values.end()))
        throw std::invalid_argument("run_scaling: H values must be ascending");

    // one table for the largest H serves every row
    BoxOptions shared = opts;
    KfreeTable table;
    if (shared.table == nullptr && shared.method != CountMethod::Factorize) {
        u64 h_max = h_values.back();
        u64 hi = checked_mul(h_max, checked_pow(h_max, spec.k));
        u64 c_abs = spec.c < 0 ? static_cast<u64>(-(spec.c + 1)) + 1 : static_cast<u64>(spec.c);
        u64 abs_hi = spec.c > 0 ? hi + c_abs : std::max<u64>(hi, c_abs);
        if (abs_hi <= shared.sieve_budget) {
            SieveOptions so;
            so.threads = shared.threads;
            so.max_entries = shared.sieve_budget;
            table = kfree_flags(1, abs_hi, spec.k, so);
            shared.table = &table;
        }
    }

    rows.reserve(h_values.size());
    for (u64 h : h_values) {
        BoxCount bc = restriction == BoxRestriction::AllIntegers
                          ? count_kfree_values(spec, h, shared)
                          : count_kfree_prime_values(spec, h, shared);
        ScalingRow row;
        row.h = h;
        row.count = bc.count;
        row.main_term = bc.main_term;
        row.main_lower = bc.main_lower;
        row.main_upper = bc.main_upper;
        row.abs_deviation = std::abs(static_cast<double>(bc.count) - bc.main_term);
        row.rel_deviation = bc.relative_deviation;
        row.indeterminate = row.abs_deviation < (bc.main_upper - bc.main_lower);
        rows.push_back(row);
    }
    return rows;
}

ExponentFit fit_error_exponent(std::span<const ScalingRow> rows) {
    ExponentFit fit;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
        if (r.abs_deviation > 0 && !r.indeterminate && r.h >= 128)
            pts.emplace_back(std::log(static_cast<double>(r.h)), std::log(r.abs_deviation));
        else
            ++fit.rows_skipped;
    }
    if (pts.size() < 3)
        throw std::invalid_argument("fit_error_exponent: need at least 3 rows with nonzero deviation");

    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    fit.slope = sxy / sxx;
    fit.rows_used = static_cast<int>(pts.size());
    return fit;
}

ExponentReport predicted_exponents(int k) {
    if (k < 2) throw std::invalid_argument("predicted_exponents: k must be >= 2");
    ExponentReport rep;
    rep.k = k;
    rep.delta = 1.0 / (7.0 * k);
    const double theta = 2.0 * rep.delta;
    rep.g = (9.0 / 8.0) * (2.0 - k * (2.0 - (rep.delta + theta)) / (k + 1.0)) * (2.0 + rep.delta);
    rep.big_g = (1.0 + 1.0 / (14.0 * k)) * (1.0 + (153.0 / 56.0) / (k + 1.0));
    if (k == 2) rep.error_exponent_k2 = rep.big_g;
    return rep;
}

i64 quadratic_form_q(i64 k, i64 alpha) {
    return 16 * alpha * alpha * k * k - (20 * alpha * alpha + 62 * alpha) * k -
           (26 * alpha + 27);
}

} // namespace kfree
