#include "kfree/local_density.hpp"

#include <map>
#include <mutex>

#include "kfree/errors.hpp"
#include "kfree/sieves.hpp"

namespace kfree {

namespace {

constexpr u64 kBruteBudget = 1'000'000;

// (-C) mod m, in [0, m)
u64 neg_c_mod(i64 c, u64 m) {
    i64 r = (-c) % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

int valuation(i64 c, u64 p) {
    u64 a = c < 0 ? static_cast<u64>(-(c + 1)) + 1 : static_cast<u64>(c);
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

u64 checked_mul_or_throw(u64 a, u64 b, const char* what) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error(what);
    return r;
}

} // namespace

LocalDensity density_brute(const PolySpec& spec, Modulus m) {
    const u64 mod = m.value();
    if (mod > kBruteBudget) throw budget_error("density_brute modulus", mod, kBruteBudget);
    const u64 t = neg_c_mod(spec.c, mod);
    u64 total = 0;
    for (u64 nu = 0; nu < mod; ++nu) {
        u64 w = nu;
        for (int i = 1; i < spec.k; ++i) w = mul_mod(w, nu, mod);
        u64 g = w == 0 ? mod : gcd(static_cast<i64>(w), static_cast<i64>(mod));
        if (t % g == 0) total += g;
    }
    return {mod, total, DensityVariant::Plain, DensityMethod::Brute};
}

LocalDensity density_coprime_brute(const PolySpec& spec, Modulus m) {
    const u64 mod = m.value();
    if (mod > kBruteBudget) throw budget_error("density_coprime_brute modulus", mod, kBruteBudget);
    if (mod == 1) return {1, 1, DensityVariant::Coprime, DensityMethod::Brute};
    const u64 t = neg_c_mod(spec.c, mod);
    u64 total = 0;
    for (u64 nu = 1; nu < mod; ++nu) {
        if (gcd(static_cast<i64>(nu), static_cast<i64>(mod)) != 1) continue;
        u64 w = nu;
        for (int i = 1; i < spec.k; ++i) w = mul_mod(w, nu, mod);
        u64 mu = mul_mod(t, *mod_inverse(w, m), mod);
        if (gcd(static_cast<i64>(mu), static_cast<i64>(mod)) == 1) ++total;
    }
    return {mod, total, DensityVariant::Coprime, DensityMethod::Brute};
}

LocalDensity density_prime_power(const PolySpec& spec, u64 p, int j) {
    if (p < 2) throw std::invalid_argument("density_prime_power: p must be prime");
    if (j < 1) throw std::invalid_argument("density_prime_power: j must be >= 1");
    const u64 pj = checked_pow(p, j);
    const int c = valuation(spec.c, p);

    auto phi_pe = [&](int e) { // phi(p^e), e >= 1
        return checked_pow(p, e - 1) * (p - 1);
    };

    u64 total = phi_pe(j);
    for (int v = 1; v < j; ++v) {
        long long ge = std::min(static_cast<long long>(spec.k) * v, static_cast<long long>(j));
        if (ge <= c) {
            u64 term = checked_mul_or_throw(phi_pe(j - v), checked_pow(p, static_cast<int>(ge)),
                                            "density_prime_power overflow");
            u64 r;
            if (__builtin_add_overflow(total, term, &r)) throw std::overflow_error("density_prime_power overflow");
            total = r;
        }
    }
    if (j <= c) {
        u64 r;
        if (__builtin_add_overflow(total, pj, &r)) throw std::overflow_error("density_prime_power overflow");
        total = r;
    }
    return {pj, total, DensityVariant::Plain, DensityMethod::Closed};
}

LocalDensity density(const PolySpec& spec, Modulus m) {
    const u64 mod = m.value();
    u64 total = 1;
    for (const auto& [p, e] : factorize(mod).factors)
        total = checked_mul_or_throw(total, density_prime_power(spec, p, e).value,
                                     "density overflow");
    return {mod, total, DensityVariant::Plain, DensityMethod::Multiplicative};
}

LocalDensity density_coprime_prime_power(const PolySpec& spec, u64 p, int j) {
    if (p < 2) throw std::invalid_argument("density_coprime_prime_power: p must be prime");
    if (j < 1) throw std::invalid_argument("density_coprime_prime_power: j must be >= 1");
    const u64 pj = checked_pow(p, j);
    u64 value = (valuation(spec.c, p) > 0) ? 0 : checked_pow(p, j - 1) * (p - 1);
    return {pj, value, DensityVariant::Coprime, DensityMethod::Closed};
}

LocalDensity density_coprime(const PolySpec& spec, Modulus m) {
    const u64 mod = m.value();
    u64 total = 1;
    for (const auto& [p, e] : factorize(mod).factors)
        total = checked_mul_or_throw(total, density_coprime_prime_power(spec, p, e).value,
                                     "density_coprime overflow");
    return {mod, total, DensityVariant::Coprime, DensityMethod::Multiplicative};
}

const ClosedFormCertificate& certify_closed_form(const PolySpec& spec) {
    static std::mutex mu;
    static std::map<std::pair<int, i64>, ClosedFormCertificate> cache;

    std::lock_guard lock(mu);
    auto key = std::make_pair(spec.k, spec.c);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    ClosedFormCertificate cert;
    cert.k = spec.k;
    cert.c = spec.c;
    cert.p_max = 13;
    cert.j_max = spec.k + 1;
    cert.ok = true;

    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        for (int j = 1; j <= cert.j_max && cert.ok; ++j) {
            u64 pj;
            try {
                pj = checked_pow(p, j);
            } catch (const std::overflow_error&) {
                break;
            }
            if (pj > kBruteBudget) break;
            Modulus m(pj);
            u64 closed = density_prime_power(spec, p, j).value;
            u64 brute = density_brute(spec, m).value;
            if (closed != brute) {
                cert.ok = false;
                cert.detail = "rho(p^j) mismatch at p=" + std::to_string(p) +
                              " j=" + std::to_string(j) + ": closed=" + std::to_string(closed) +
                              " brute=" + std::to_string(brute);
                break;
            }
            u64 closed_cop = density_coprime_prime_power(spec, p, j).value;
            u64 brute_cop = density_coprime_brute(spec, m).value;
            if (closed_cop != brute_cop) {
                cert.ok = false;
                cert.detail = "rho'(p^j) mismatch at p=" + std::to_string(p) +
                              " j=" + std::to_string(j) + ": closed=" + std::to_string(closed_cop) +
                              " brute=" + std::to_string(brute_cop);
                break;
            }
        }
        if (!cert.ok) break;
    }
    return cache.emplace(key, std::move(cert)).first->second;
}

u64 count_in_progression(u64 alpha, Modulus m, u64 limit) {
    const u64 mod = m.value();
    if (alpha >= mod) throw std::invalid_argument("count_in_progression: alpha must be < m");
    const u64 least = alpha == 0 ? mod : alpha; // least positive representative
    if (least > limit) return 0;
    return (limit - least) / mod + 1;
}

} // namespace kfree
