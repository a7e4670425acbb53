#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kfree/dioph.hpp"
#include "kfree/errors.hpp"
#include "support/oracles.hpp"

using namespace kfree;
using namespace kfree::testing;

TEST_CASE("open dyadic interval convention") {
    // x ~ X means X < x < 2X, boundaries excluded
    auto r = open_dyadic_integers(2.0);
    CHECK(r.lo == 3);
    CHECK(r.hi == 3);
    r = open_dyadic_integers(4.0);
    CHECK(r.lo == 5);
    CHECK(r.hi == 7);
    r = open_dyadic_integers(2.5);
    CHECK(r.lo == 3);
    CHECK(r.hi == 4);
    CHECK(open_dyadic_integers(0.4).empty());
    CHECK(open_dyadic_integers(1.0).empty()); // (1, 2) holds no integer
}

TEST_CASE("dyadic partition covers exactly") {
    auto pieces = dyadic_partition(1, 10);
    REQUIRE(pieces.size() == 4);
    CHECK(pieces[0].lo == 1);
    CHECK(pieces[0].hi == 1);
    CHECK(pieces[1].lo == 2);
    CHECK(pieces[1].hi == 3);
    CHECK(pieces[2].lo == 4);
    CHECK(pieces[2].hi == 7);
    CHECK(pieces[3].lo == 8);
    CHECK(pieces[3].hi == 10);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        i64 lo = 1 + static_cast<i64>(rng() % 100);
        i64 hi = lo + static_cast<i64>(rng() % 500);
        i64 next = lo;
        for (auto piece : dyadic_partition(lo, hi)) {
            CHECK(piece.lo == next);
            CHECK(piece.hi >= piece.lo);
            CHECK(piece.hi <= 2 * piece.lo - 1);
            next = piece.hi + 1;
        }
        CHECK(next == hi + 1);
    }
}

TEST_CASE("the pinned instance") {
    // k=2, l=1, h=9, D=E=2, z=16: d=e=3, u,v in {5,6,7}, 9(v-u) = 9
    DyadicInstance inst(16.0, 2.0, 2.0, EquationForm(2, 1, 9));
    CHECK(inst.u_box() == doctest::Approx(4.0));
    CHECK(inst.v_box() == doctest::Approx(4.0));
    CHECK(count_dyadic_solutions(inst) == 2);

    DyadicInstance impossible(16.0, 2.0, 2.0, EquationForm(2, 1, 1));
    CHECK(count_dyadic_solutions(impossible) == 0);

    // U below 1/2 leaves an empty box
    DyadicInstance empty(2.0, 8.0, 8.0, EquationForm(2, 1, 5));
    CHECK(empty.u_box() < 0.5);
    CHECK(count_dyadic_solutions(empty) == 0);
}

TEST_CASE("hash join equals the quadruple loop on random instances") {
    std::mt19937_64 rng(20151020);
    int tested = 0;
    while (tested < 200) {
        int k = 2 + static_cast<int>(rng() % 2);
        int l = 1 + static_cast<int>(rng() % (k - 1));
        i64 h = static_cast<i64>(rng() % 40) - 20;
        if (h == 0) continue;
        double d = 1.5 + static_cast<double>(rng() % 1300) / 100.0;
        double e = 1.5 + static_cast<double>(rng() % 1300) / 100.0;
        double u0 = 1.5 + static_cast<double>(rng() % 1300) / 100.0;
        double z = std::pow(u0, l) * std::pow(d, k);
        DyadicInstance inst(z, d, e, EquationForm(k, l, h));
        if (inst.v_box() > 15.0 || inst.v_box() < 0.2) continue;

        auto db = open_dyadic_integers(inst.d_box);
        auto eb = open_dyadic_integers(inst.e_box);
        auto ub = open_dyadic_integers(inst.u_box());
        auto vb = open_dyadic_integers(inst.v_box());
        if (db.size() > 30 || eb.size() > 30 || ub.size() > 30 || vb.size() > 30) continue;

        u64 fast = count_dyadic_solutions(inst);
        u64 slow = quadruple_loop(inst.eq, db, eb, ub, vb);
        if (fast != slow) {
            CAPTURE(k);
            CAPTURE(l);
            CAPTURE(h);
            CAPTURE(z);
            CHECK(fast == slow);
            return;
        }
        ++tested;
    }
    CHECK(tested == 200);
}

TEST_CASE("dyadic tiling of a rectangle sums to the direct count") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        int k = 2 + static_cast<int>(rng() % 2);
        int l = 1 + static_cast<int>(rng() % (k - 1));
        i64 h = static_cast<i64>(rng() % 60) - 30;
        if (h == 0) h = 7;
        EquationForm eq(k, l, h);
        auto draw = [&]() {
            i64 lo = 1 + static_cast<i64>(rng() % 40);
            return IntRange{lo, lo + static_cast<i64>(rng() % 20)};
        };
        IntRange db = draw(), eb = draw(), ub = draw(), vb = draw();

        u64 direct = quadruple_loop(eq, db, eb, ub, vb);
        u64 tiled = 0;
        for (auto dt : dyadic_partition(db.lo, db.hi))
            for (auto et : dyadic_partition(eb.lo, eb.hi))
                for (auto ut : dyadic_partition(ub.lo, ub.hi))
                    for (auto vt : dyadic_partition(vb.lo, vb.hi))
                        tiled += count_box_solutions(eq, dt, et, ut, vt);
        CHECK(tiled == direct);
    }
}

TEST_CASE("reuss_bound formulas") {
    DyadicInstance inst(16.0, 2.0, 2.0, EquationForm(2, 1, 9));
    auto rb = reuss_bound(inst, 0.1);
    // log M = (9/8) log4 log16 / log16 = (9/8) log 4
    CHECK(std::log(rb.m) == doctest::Approx((9.0 / 8.0) * std::log(4.0)).epsilon(1e-12));
    double zeps = std::pow(16.0, 0.1);
    CHECK(rb.bound_de ==
          doctest::Approx(zeps * (std::sqrt(4.0 * rb.m) + 4.0)).epsilon(1e-12));
    CHECK(rb.bound == doctest::Approx(std::min(rb.bound_de, rb.bound_uv)));
    CHECK(rb.log_ratio_de == doctest::Approx(0.5));
    CHECK(rb.log_ratio_uv == doctest::Approx(1.0));
    CHECK(rb.ratios_ok);
    CHECK(rb.size_ok); // DE = 4 >= 16^{1/2} = 4

    // symmetric instance: D = E = U = V forces equal branches
    DyadicInstance sym(64.0, 4.0, 4.0, EquationForm(2, 1, 9));
    CHECK(sym.u_box() == doctest::Approx(4.0));
    auto rs = reuss_bound(sym, 0.1);
    CHECK(rs.bound_de == doctest::Approx(rs.bound_uv).epsilon(1e-12));

    // l = 1 with DE below z^{1/k} fails the size condition
    DyadicInstance small(1e6, 1.2, 1.2, EquationForm(2, 1, 9));
    CHECK_FALSE(reuss_bound(small, 0.1).size_ok);
}

TEST_CASE("bound sanity on hypothesis-satisfying instances") {
    std::mt19937_64 rng(7);
    int used = 0;
    while (used < 40) {
        double d = 2.0 + static_cast<double>(rng() % 600) / 100.0;
        double e = 2.0 + static_cast<double>(rng() % 600) / 100.0;
        double u0 = 2.0 + static_cast<double>(rng() % 600) / 100.0;
        i64 h = static_cast<i64>(rng() % 20) - 10;
        if (h == 0) continue;
        double z = u0 * d * d; // k=2, l=1
        DyadicInstance inst(z, d, e, EquationForm(2, 1, h));
        if (inst.v_box() > 12.0 || inst.v_box() < 1.0) continue;
        auto rb = reuss_bound(inst, 0.2);
        if (!rb.ratios_ok || !rb.size_ok) continue;
        u64 n = count_dyadic_solutions(inst);
        CHECK(static_cast<double>(n) <= 100.0 * rb.bound);
        ++used;
    }
    CHECK(used == 40);
}

TEST_CASE("enumerate_equation_solutions") {
    PolySpec s(2, 4);
    auto sols = enumerate_equation_solutions(s, {1, 10}, {1, 10}, {2, 3});
    bool found = false;
    for (const auto& sol : sols)
        if (sol == EquationSolution{3, 2, 4, 2}) found = true; // 3*4+4 = 16 = 4*4
    CHECK(found);
    for (const auto& sol : sols) {
        CHECK(sol.a >= 1);
        i64 dk = sol.d * sol.d;
        CHECK(sol.x * sol.y * sol.y + 4 == sol.a * dk);
    }

    CHECK(enumerate_equation_solutions(s, {1, 10}, {1, 10}, {5, 4}).empty());

    auto unit = enumerate_equation_solutions(s, {1, 1}, {1, 1}, {1, 1});
    REQUIRE(unit.size() == 1);
    CHECK(unit[0] == EquationSolution{1, 1, 5, 1});

    // against a direct triple loop
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        int kk = 2 + static_cast<int>(rng() % 2);
        i64 cc = static_cast<i64>(rng() % 19) - 9;
        if (cc == 0) cc = 5;
        PolySpec spec(kk, cc);
        IntRange xr{1 + static_cast<i64>(rng() % 10), 0};
        xr.hi = xr.lo + static_cast<i64>(rng() % 15);
        IntRange yr{1 + static_cast<i64>(rng() % 6), 0};
        yr.hi = yr.lo + static_cast<i64>(rng() % 8);
        IntRange dr{1 + static_cast<i64>(rng() % 4), 0};
        dr.hi = dr.lo + static_cast<i64>(rng() % 6);

        auto got = enumerate_equation_solutions(spec, xr, yr, dr);
        std::vector<EquationSolution> want;
        for (i64 x = xr.lo; x <= xr.hi; ++x)
            for (i64 y = yr.lo; y <= yr.hi; ++y)
                for (i64 d = dr.lo; d <= dr.hi; ++d) {
                    i64 yk = 1, dk = 1;
                    for (int i = 0; i < spec.k; ++i) {
                        yk *= y;
                        dk *= d;
                    }
                    i64 v = x * yk + spec.c;
                    if (v >= dk && v % dk == 0) want.push_back({x, y, v / dk, d});
                }
        CHECK(got.size() == want.size());
    }
}

TEST_CASE("budget errors") {
    EquationForm eq(2, 1, 5);
    CHECK_THROWS_AS(count_box_solutions(eq, {1, 20000000}, {1, 2}, {1, 2}, {1, 2}),
                    budget_error);
    PolySpec s(2, 4);
    CHECK_THROWS_AS(enumerate_equation_solutions(s, {1, 100000}, {1, 200}, {1, 2}),
                    budget_error);
}
