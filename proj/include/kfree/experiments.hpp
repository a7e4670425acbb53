#pragma once
#include <optional>
#include <span>
#include <vector>

#include "kfree/box_counting.hpp"

// Reproduction harness: scaling studies of the box counts against the
// predicted main terms, empirical error-exponent fits, and the closed-form
// predicted exponents.

namespace kfree {

struct ScalingRow {
    u64 h = 0;
    u64 count = 0;
    double main_term = 0.0;
    double main_lower = 0.0;
    double main_upper = 0.0;
    double abs_deviation = 0.0;
    double rel_deviation = 0.0;
    // set when |count - main_term| is smaller than the bracket-induced
    // uncertainty, i.e. the deviation is not resolved by the enclosure
    bool indeterminate = false;
};

// One row per H (ascending).  The k-free table and the constant bracket are
// built once and shared across rows, so rows are bit-identical however the
// list is chunked.
std::vector<ScalingRow> run_scaling(const PolySpec& spec, std::span<const u64> h_values,
                                    BoxRestriction restriction, const BoxOptions& opts = {});

struct ExponentFit {
    double slope = 0.0;
    int rows_used = 0;
    int rows_skipped = 0; // rows with unresolved or zero deviation, or H < 128
};

// Least-squares slope of log(abs_deviation) against log(H).  Skipped and
// reported: rows with zero deviation, indeterminate rows (the enclosure
// cannot resolve a deviation below its own width, so its logarithm is
// bracket noise), and rows with H < 128 where small-d fluctuations dominate.
// Needs at least three usable rows.
ExponentFit fit_error_exponent(std::span<const ScalingRow> rows);

struct ExponentReport {
    int k = 2;
    double delta = 0.0;   // 1/(7k)
    double g = 0.0;       // g(k, delta, 2*delta)
    double big_g = 0.0;   // G_k = (1 + 1/(14k)) (1 + (9*17)/(7*8) / (k+1))
    std::optional<double> error_exponent_k2; // = G_2 when k == 2
};

// The closed-form exponents of the error analysis:
//   g(k, delta, theta) = (9/8) (2 - k (2 - (delta+theta)) / (k+1)) (2 + delta)
// evaluated at theta = 2*delta, delta = 1/(7k), and
//   G_k = 1 + delta/2 + g/2 = (1 + 1/(14k)) (1 + (153/56) / (k+1)).
ExponentReport predicted_exponents(int k);

// Q(k, alpha) = 16 a^2 k^2 - (20 a^2 + 62 a) k - (26 a + 27); positive at
// alpha = 7 for every k >= 2, which is what makes G_k < 2.
i64 quadratic_form_q(i64 k, i64 alpha);

} // namespace kfree
