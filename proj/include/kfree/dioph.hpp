#pragma once
#include <vector>

#include "kfree/local_density.hpp"

// Exact enumeration of the Diophantine counts behind the determinant-method
// bound: solutions of v^l e^k - u^l d^k = h over dyadic boxes, solutions of
// x y^k + C = a d^k over ranges, and the numeric evaluation of the bound
// itself.

namespace kfree {

// inclusive integer interval; lo > hi means empty
struct IntRange {
    i64 lo = 1;
    i64 hi = 0;
    bool empty() const { return lo > hi; }
    u64 size() const { return empty() ? 0 : static_cast<u64>(hi - lo + 1); }
};

// integers strictly inside the open dyadic interval (X, 2X)
IntRange open_dyadic_integers(double x);

// dyadic pieces [c, min(2c-1, hi)] covering [lo, hi] exactly
std::vector<IntRange> dyadic_partition(i64 lo, i64 hi);

// v^l e^k - u^l d^k = h with 1 <= l < k and h != 0
struct EquationForm {
    int k;
    int l;
    i64 h;

    EquationForm(int k_, int l_, i64 h_) : k(k_), l(l_), h(h_) {
        if (l_ < 1 || l_ >= k_) throw std::invalid_argument("EquationForm: need 1 <= l < k");
        if (h_ == 0) throw std::invalid_argument("EquationForm: h must be nonzero");
    }
};

// A dyadic instance (z, D, E, k, l, h); the u and v boxes are derived, never
// stored: U = z^{1/l} / D^{k/l}, V = z^{1/l} / E^{k/l}.
struct DyadicInstance {
    double z;
    double d_box;
    double e_box;
    EquationForm eq;

    DyadicInstance(double z_, double d_, double e_, EquationForm eq_)
        : z(z_), d_box(d_), e_box(e_), eq(eq_) {
        if (!(z_ > 1) || !(d_ > 1) || !(e_ > 1))
            throw std::invalid_argument("DyadicInstance: need z, D, E > 1");
    }
    double u_box() const;
    double v_box() const;
};

// Exact count of quadruples (d, e, u, v) of positive integers in the given
// inclusive boxes with v^l e^k - u^l d^k = h, by hash join: map u^l d^k + h
// over (u, d), probe with v^l e^k over (v, e).
u64 count_box_solutions(const EquationForm& eq, IntRange dbox, IntRange ebox, IntRange ubox,
                        IntRange vbox);

// count over the open dyadic boxes (D,2D) x (E,2E) x (U,2U) x (V,2V)
u64 count_dyadic_solutions(const DyadicInstance& inst);

struct ReussBound {
    double m = 1.0;         // log M = (9/8) log(DE) log(UV) / log z
    double bound_de = 0.0;  // z^eps ((DEM)^{1/2} + D + E)
    double bound_uv = 0.0;  // z^eps ((UVM)^{1/2} + U + V)
    double bound = 0.0;     // min of the two branches
    double log_ratio_de = 0.0; // log(DE) / log z
    double log_ratio_uv = 0.0; // log(UV) / log z
    bool ratios_ok = false;    // both ratios within [1/4, 4]
    bool size_ok = false;      // l >= 2 or DE >= z^{1/k}
};

// Evaluates the determinant-method bound and reports whether the two
// hypotheses hold (failures are advisory, not fatal).
ReussBound reuss_bound(const DyadicInstance& inst, double epsilon);

struct EquationSolution {
    i64 x, y, a, d;
    bool operator==(const EquationSolution&) const = default;
};

// All solutions of x y^k + C = a d^k with x, y, d in the given ranges
// (clamped to positive integers) and a >= 1 by exact division.
std::vector<EquationSolution> enumerate_equation_solutions(const PolySpec& spec, IntRange xr,
                                                           IntRange yr, IntRange dr);

} // namespace kfree
