#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfree/errors.hpp"
#include "kfree/local_density.hpp"
#include "support/oracles.hpp"

using namespace kfree;
using namespace kfree::testing;

TEST_CASE("PolySpec validates") {
    CHECK_THROWS_AS(PolySpec(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(PolySpec(2, 0), std::invalid_argument);
}

TEST_CASE("density_brute examples") {
    PolySpec s(2, 4);
    CHECK(density_brute(s, Modulus(9)).value == 6);
    CHECK(density_brute(s, Modulus(4)).value == 10);
    CHECK(density_brute(s, Modulus(1)).value == 1);
    CHECK_THROWS_AS(density_brute(s, Modulus(2000000)), budget_error);
}

TEST_CASE("density_brute equals the plain double loop") {
    for (auto spec : {PolySpec(2, 4), PolySpec(2, -1), PolySpec(3, -1), PolySpec(3, 12)}) {
        for (u64 m = 1; m <= 200; ++m) {
            if (density_brute(spec, Modulus(m)).value != rho_double_loop(spec, m)) {
                CAPTURE(spec.k);
                CAPTURE(spec.c);
                CAPTURE(m);
                CHECK(density_brute(spec, Modulus(m)).value == rho_double_loop(spec, m));
                return;
            }
        }
    }
    // a few larger spot checks
    PolySpec s(2, 4);
    for (u64 m : {360ull, 729ull, 1000ull})
        CHECK(density_brute(s, Modulus(m)).value == rho_double_loop(s, m));
}

TEST_CASE("coprime brute equals the coprime double loop") {
    for (auto spec : {PolySpec(2, 4), PolySpec(3, -1)})
        for (u64 m = 1; m <= 150; ++m)
            CHECK(density_coprime_brute(spec, Modulus(m)).value ==
                  rho_coprime_double_loop(spec, m));
}

TEST_CASE("closed prime-power form examples") {
    CHECK(density_prime_power(PolySpec(2, 4), 3, 2).value == 6);   // phi(9)
    CHECK(density_prime_power(PolySpec(2, 4), 2, 2).value == 10);  // phi(4) + 2^3
    CHECK(density_prime_power(PolySpec(2, 1), 5, 2).value == 20);  // phi(25)
}

TEST_CASE("closed form certified against brute on the full grid") {
    for (int k : {2, 3}) {
        for (i64 c : {i64{1}, i64{-1}, i64{4}, i64{-4}, i64{8}, i64{12}}) {
            PolySpec spec(k, c);
            const auto& cert = certify_closed_form(spec);
            CHECK_MESSAGE(cert.ok, cert.detail);
            for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
                for (int j = 1; j <= k + 1; ++j) {
                    u64 pj = 1;
                    for (int i = 0; i < j; ++i) pj *= p;
                    if (pj > 1000000) break;
                    CHECK(density_prime_power(spec, p, j).value ==
                          density_brute(spec, Modulus(pj)).value);
                    CHECK(density_coprime_prime_power(spec, p, j).value ==
                          density_coprime_brute(spec, Modulus(pj)).value);
                }
            }
        }
    }
}

TEST_CASE("prime-power bounds over the grid") {
    for (int k : {2, 3}) {
        for (i64 c : {i64{1}, i64{-1}, i64{4}, i64{-4}, i64{8}, i64{12}}) {
            PolySpec spec(k, c);
            for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
                u64 rho = density_prime_power(spec, p, k).value;
                u64 p2k2 = 1;
                for (int i = 0; i < 2 * k - 2; ++i) p2k2 *= p;
                CHECK(rho <= p2k2 * std::max<u64>(p, 4)); // concrete Hooley-type bound
                CHECK(rho < p2k2 * p * p);                // nonvanishing: rho(p^k) < p^{2k}
                u64 phi = 1;
                for (int i = 0; i < k - 1; ++i) phi *= p;
                phi *= (p - 1);
                CHECK(density_coprime_prime_power(spec, p, k).value <= phi);
            }
        }
    }
}

TEST_CASE("multiplicative composition") {
    PolySpec s(2, 4);
    CHECK(density(s, Modulus(36)).value == 60); // 10 * 6
    CHECK(density(s, Modulus(1)).value == 1);
    CHECK(density(s, Modulus(36)).value == density_brute(s, Modulus(36)).value);
    CHECK(density(PolySpec(3, -1), Modulus(8)).value == 4); // phi(8)

    // brute is multiplicative on coprime arguments (trimmed grid; the
    // acceptance suite runs the full m, n <= 200 one)
    for (auto spec : {PolySpec(2, 1), PolySpec(2, -4)}) {
        for (u64 m = 1; m <= 60; ++m)
            for (u64 n = m + 1; n <= 60; ++n) {
                if (gcd_naive(m, n) != 1) continue;
                CHECK(density_brute(spec, Modulus(m * n)).value ==
                      density_brute(spec, Modulus(m)).value *
                          density_brute(spec, Modulus(n)).value);
                CHECK(density_coprime_brute(spec, Modulus(m * n)).value ==
                      density_coprime_brute(spec, Modulus(m)).value *
                          density_coprime_brute(spec, Modulus(n)).value);
            }
    }
}

TEST_CASE("density matches brute on arbitrary moduli") {
    for (auto spec : {PolySpec(2, 4), PolySpec(2, -1), PolySpec(3, 12)})
        for (u64 m = 1; m <= 400; ++m)
            CHECK(density(spec, Modulus(m)).value == density_brute(spec, Modulus(m)).value);
}

TEST_CASE("coprime variant examples") {
    PolySpec s(2, 4);
    CHECK(density_coprime(s, Modulus(4)).value == 0); // 2 | 4
    CHECK(density_coprime(s, Modulus(9)).value == 6); // phi(9)
    CHECK(density_coprime(s, Modulus(1)).value == 1);
    for (u64 m = 1; m <= 200; ++m)
        CHECK(density_coprime(s, Modulus(m)).value == density_coprime_brute(s, Modulus(m)).value);
}

TEST_CASE("count_in_progression") {
    CHECK(count_in_progression(1, Modulus(3), 10) == 4);  // 1,4,7,10
    CHECK(count_in_progression(0, Modulus(7), 6) == 0);
    CHECK(count_in_progression(2, Modulus(5), 100) == 20);
    CHECK_THROWS_AS(count_in_progression(5, Modulus(5), 10), std::invalid_argument);

    for (u64 m = 1; m <= 50; ++m)
        for (u64 h : {1ull, 2ull, 49ull, 50ull, 999ull, 1000ull}) {
            u64 sum = 0;
            for (u64 alpha = 0; alpha < m; ++alpha) sum += count_in_progression(alpha, Modulus(m), h);
            CHECK(sum == h);
        }
}
