#include "kfree/arith.hpp"

#include <numeric>

namespace kfree {

namespace {

u64 magnitude(i64 a) {
    // two's-complement safe |a|, works for INT64_MIN
    return a < 0 ? ~static_cast<u64>(a) + 1 : static_cast<u64>(a);
}

} // namespace

u64 gcd(i64 a, i64 b) { return std::gcd(magnitude(a), magnitude(b)); }

u64 mul_mod(u64 a, u64 b, u64 m) {
    if (m <= UINT32_MAX) return (a % m) * (b % m) % m; // product fits in u64
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 mod_pow(u64 base, u64 exp, Modulus m) {
    const u64 mod = m.value();
    if (mod == 1) return 0;
    u64 result = 1;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, mod);
        base = mul_mod(base, base, mod);
        exp >>= 1;
    }
    return result;
}

std::optional<u64> mod_inverse(u64 a, Modulus m) {
    const u64 mod = m.value();
    if (mod == 1) return 0;
    // extended Euclid on (a mod m, m); track only the coefficient of a
    i64 t = 0, new_t = 1;
    u64 r = mod, new_r = a % mod;
    while (new_r != 0) {
        u64 q = r / new_r;
        i64 tmp_t = t - static_cast<i64>(q) * new_t;
        t = new_t;
        new_t = tmp_t;
        u64 tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    if (r != 1) return std::nullopt;
    return t < 0 ? static_cast<u64>(t + static_cast<i64>(mod)) : static_cast<u64>(t);
}

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    f.n = n;
    u64 rest = n;
    auto strip = [&](u64 p) {
        if (rest % p != 0) return;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    // 6k+-1 wheel
    for (u64 p = 5; p <= rest / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (rest > 1) f.factors.emplace_back(rest, 1);
    return f;
}

bool is_kfree(i64 n, int k) {
    if (k < 2) throw std::invalid_argument("is_kfree: k must be >= 2");
    if (n == 0) return false;
    const u64 a = magnitude(n);
    if (a == 1) return true;
    for (const auto& [p, e] : factorize(a).factors) {
        (void)p;
        if (e >= k) return false;
    }
    return true;
}

int mobius(u64 n) {
    if (n == 0) throw std::invalid_argument("mobius: n must be >= 1");
    int sign = 1;
    for (const auto& [p, e] : factorize(n).factors) {
        (void)p;
        if (e >= 2) return 0;
        sign = -sign;
    }
    return sign;
}

u64 euler_phi(u64 n) {
    if (n == 0) throw std::invalid_argument("euler_phi: n must be >= 1");
    u64 result = n;
    for (const auto& [p, e] : factorize(n).factors) {
        (void)e;
        result -= result / p;
    }
    return result;
}

u64 nth_root_floor(u64 n, int k) {
    if (k < 1) throw std::invalid_argument("nth_root_floor: k must be >= 1");
    if (k == 1 || n <= 1) return n;
    // r^k <= n in u128 without overflow for r < 2^64
    auto pow_leq = [](u64 r, int k, u64 n) {
        u128 acc = 1;
        for (int i = 0; i < k; ++i) {
            acc *= r;
            if (acc > n) return false;
        }
        return true;
    };
    u64 lo = 1, hi = 2;
    while (pow_leq(hi, k, n)) {
        lo = hi;
        if (hi > (UINT64_MAX >> 1)) break;
        hi <<= 1;
    }
    while (lo + 1 < hi) {
        u64 mid = lo + (hi - lo) / 2;
        if (pow_leq(mid, k, n))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("u64 multiply overflow");
    return r;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("i64 multiply overflow");
    return r;
}

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("i64 add overflow");
    return r;
}

u64 checked_pow(u64 base, int exp) {
    if (exp < 0) throw std::invalid_argument("checked_pow: negative exponent");
    u64 acc = 1;
    for (int i = 0; i < exp; ++i) acc = checked_mul(acc, base);
    return acc;
}

} // namespace kfree
