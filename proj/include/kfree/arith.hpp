#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

// Exact integer and modular arithmetic primitives.  Everything here is pure
// and deterministic; overflow raises std::overflow_error, never wraps.

namespace kfree {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// A validated modulus m >= 1.  Residue arguments are reduced into [0, m).
class Modulus {
public:
    explicit Modulus(u64 m) : m_(m) {
        if (m == 0) throw std::invalid_argument("Modulus: m must be >= 1");
    }
    u64 value() const { return m_; }

private:
    u64 m_;
};

// Exact prime factorization of n, primes strictly increasing, exponents >= 1.
// factorize(1) has an empty factor list.
struct Factorization {
    u64 n = 1;
    std::vector<std::pair<u64, int>> factors;
};

// Nonnegative gcd; gcd(0,0) = 0.  Safe for INT64_MIN.
u64 gcd(i64 a, i64 b);

// a*b mod m without overflow (128-bit intermediate).
u64 mul_mod(u64 a, u64 b, u64 m);

// base^exp mod m, result in [0, m).  mod_pow(x, 0, m) = 1 mod m.
u64 mod_pow(u64 base, u64 exp, Modulus m);

// Multiplicative inverse of a mod m, or nullopt when gcd(a, m) != 1.
// mod_inverse(1, 1) = 0 (everything is congruent mod 1).
std::optional<u64> mod_inverse(u64 a, Modulus m);

// Trial division up to sqrt(n); intended for n below ~2^63 at desk scale.
Factorization factorize(u64 n);

// Characteristic function of the k-free integers (k >= 2): true iff no prime
// p has p^k | n.  Negative n is judged by |n|; 0 is divisible by every p^k
// and is never k-free.
bool is_kfree(i64 n, int k);

// Moebius function from the factorization of n (n >= 1).
int mobius(u64 n);

// Euler totient.
u64 euler_phi(u64 n);

// floor(n^(1/k)) with an exactness check r^k <= n < (r+1)^k; no float roots
// leak into the result.
u64 nth_root_floor(u64 n, int k);

// Checked arithmetic: throws std::overflow_error instead of wrapping.
u64 checked_mul(u64 a, u64 b);
i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);
u64 checked_pow(u64 base, int exp);

} // namespace kfree
