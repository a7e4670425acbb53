#pragma once
#include <string>

#include "kfree/arith.hpp"

// Local solution counts of x*y^k + C == 0 (mod m), three independent ways:
// a brute-force reference (per-nu gcd solvability), a prime-power closed
// form, and multiplicative composition over the factorization of m.  The
// closed form is never assumed: certify_closed_form checks it against the
// brute oracle and the result is memoized per (k, C).

namespace kfree {

// The polynomial x*y^k + C with k >= 2 and C != 0.
struct PolySpec {
    int k;
    i64 c;

    PolySpec(int k_, i64 c_) : k(k_), c(c_) {
        if (k_ < 2) throw std::invalid_argument("PolySpec: k must be >= 2");
        if (c_ == 0) throw std::invalid_argument("PolySpec: C must be nonzero");
    }
    bool operator==(const PolySpec&) const = default;
};

enum class DensityVariant { Plain, Coprime };
enum class DensityMethod { Brute, Closed, Multiplicative };

struct LocalDensity {
    u64 m = 1;
    u64 value = 1;
    DensityVariant variant = DensityVariant::Plain;
    DensityMethod method = DensityMethod::Brute;
};

// Exact count of pairs (mu, nu) in [0,m)^2 with mu*nu^k + C == 0 (mod m).
// For each nu the congruence in mu has gcd(nu^k, m) solutions iff that gcd
// divides C, so the loop is O(m log m); m <= 10^6.
LocalDensity density_brute(const PolySpec& spec, Modulus m);

// Same count restricted to (mu, m) = (nu, m) = 1; m <= 10^6.
LocalDensity density_coprime_brute(const PolySpec& spec, Modulus m);

// rho(p^j) in closed form from the unit/non-unit split on nu.  With
// c = v_p(C):
//   rho(p^j) = phi(p^j)
//            + sum_{v=1}^{j-1} phi(p^{j-v}) * p^min(kv,j) * [min(kv,j) <= c]
//            + p^j * [j <= c]
// For j = k this reduces to phi(p^k) + p^{2k-1}*[p^k | C].
LocalDensity density_prime_power(const PolySpec& spec, u64 p, int j);

// rho(m) = product of rho(p^j) over the factorization of m.
LocalDensity density(const PolySpec& spec, Modulus m);

// rho'(p^j) = phi(p^j) when p does not divide C, else 0: for nu coprime to p
// the congruence has the single solution mu = -C * nu^{-k}, coprime to p
// exactly when p does not divide C.
LocalDensity density_coprime_prime_power(const PolySpec& spec, u64 p, int j);

// rho'(m) multiplicatively.
LocalDensity density_coprime(const PolySpec& spec, Modulus m);

// Closed forms checked against the brute oracle over primes p <= p_max and
// exponents j <= j_max (cells above the brute budget are skipped).  Memoized
// per (k, C); `detail` names the first failing cell if any.
struct ClosedFormCertificate {
    int k = 0;
    i64 c = 0;
    bool ok = false;
    u64 p_max = 0;
    int j_max = 0;
    std::string detail;
};
const ClosedFormCertificate& certify_closed_form(const PolySpec& spec);

// Count of 1 <= x <= limit with x == alpha (mod m), by closed formula.
u64 count_in_progression(u64 alpha, Modulus m, u64 limit);

} // namespace kfree
