// Constructive APN exponents over F_{3^n}, n odd.
//
// The whole family hangs on one arithmetic condition: an even residue r mod
// 3^n - 1 with
//
//     (3^m + 1) r - 2 = k (3^n - 1),   k odd,  gcd(m, n) = 1,
//
// makes x^r APN. For each admissible m there is exactly one such even
// residue, and it has the closed form
//
//     r = (3^{um} - 1) / (3^m + 1)        if u is even,
//     r = (1 - 3^{(n-u)m}) / (1 + 3^m)    if u is odd,
//
// where u = m^{-1} mod n. In the odd-u case the closed form lands on an
// equivalent coset member; multiplying by 3 recovers the residue that
// satisfies the displayed identity. Everything here is pure integer
// arithmetic on (n, m) -- no field tables are needed.

#ifndef CHI3_APN_EXPONENTS_HPP
#define CHI3_APN_EXPONENTS_HPP

#include <numeric>
#include <optional>
#include <vector>

#include "chi3/functions.hpp"

namespace chi3 {

namespace detail {

// sum_{i=0}^{terms-1} 3^{step_exp * i} mod M. M < 2^26 here, so plain u64
// products never overflow.
inline u64 geom_sum_pow3(u64 step_exp, u64 terms, u64 M) {
    u64 step = 1;
    for (u64 i = 0; i < step_exp; ++i) step = step * 3 % M;
    u64 acc = 0, term = 1;
    for (u64 i = 0; i < terms; ++i) {
        acc = (acc + term) % M;
        term = term * step % M;
    }
    return acc;
}

// 3^n - 1, restricted to the range where every product of two residues in
// this header stays inside 64 bits.
inline u64 apn_modulus(int n) {
    if (n < 3 || n > 20)
        throw domain_error("APN exponent arithmetic supports 3 <= n <= 20");
    return pow3(unsigned(n)) - 1;
}

}  // namespace detail

struct ApnWitness {
    int n = 0;
    int m = 0;
    int u = 0;       // m^{-1} mod n, taken in [1, n-1]
    u64 r = 0;       // closed-form exponent reduced mod 3^n - 1
    u64 r_even = 0;  // the coset member satisfying the defining identity
    u64 k = 0;       // odd cofactor: (3^m + 1) r_even - 2 = k (3^n - 1)

    bool u_even() const { return (u & 1u) == 0; }
};

// Returns the cofactor k if r is even and (3^m + 1) r - 2 = k (3^n - 1) with
// k odd; nullopt when r fails the condition. For even n the identity is
// unsatisfiable outright -- the left side is 2 mod 4 while 8 | 3^n - 1 -- so
// asking for it is treated as a domain error rather than a search miss.
inline std::optional<u64> apn_condition_check(int n, int m, u64 r) {
    if (n % 2 == 0) throw domain_error("APN condition requires odd n");
    if (m < 1 || m >= n || std::gcd(m, n) != 1)
        throw domain_error("APN condition requires 1 <= m < n with gcd(m, n) = 1");
    const u64 M = detail::apn_modulus(n);
    if (r == 0 || r >= M || (r & 1u)) return std::nullopt;
    const u64 lhs = (detail::pow3(unsigned(m)) + 1) * r - 2;
    if (lhs % M != 0) return std::nullopt;
    const u64 k = lhs / M;
    if ((k & 1u) == 0) return std::nullopt;
    return k;
}

// The unique APN exponent class for a given m, with its identity witness.
inline ApnWitness apn_exponent(int n, int m) {
    if (n % 2 == 0) throw domain_error("APN exponents require odd n");
    if (m < 1 || m >= n || std::gcd(m, n) != 1)
        throw domain_error("APN exponents require 1 <= m < n with gcd(m, n) = 1");
    const u64 M = detail::apn_modulus(n);
    int u = 0;
    for (int c = 1; c < n; ++c)
        if (u64(c) * m % n == 1) {
            u = c;
            break;
        }

    // Both branches reduce to (3^m - 1) * sum of 3^{2mi}, using
    // 3^{2mt} - 1 = (3^{2m} - 1) sum_{i<t} 3^{2mi} and 3^{2m} - 1 =
    // (3^m - 1)(3^m + 1); the division by 3^m + 1 is thereby exact and the
    // whole computation stays reduced mod M.
    const u64 factor = detail::pow3(m) - 1;
    u64 r;
    if ((u & 1u) == 0) {
        r = factor * detail::geom_sum_pow3(2 * m, u / 2, M) % M;
    } else {
        u64 s = factor * detail::geom_sum_pow3(2 * m, (u64(n) - u) / 2, M) % M;
        r = (M - s) % M;
    }

    ApnWitness w;
    w.n = n;
    w.m = m;
    w.u = u;
    w.r = r;
    w.r_even = (u & 1u) ? r * 3 % M : r;
    auto k = apn_condition_check(n, m, w.r_even);
    if (!k)
        throw invariant_error("constructed APN exponent fails its own defining identity");
    w.k = *k;
    return w;
}

// Brute force over all even residues mod 3^n - 1; exactly one must satisfy
// the condition for each admissible m.
inline u64 apn_unique_even(int n, int m) {
    const u64 M = detail::apn_modulus(n);
    std::optional<u64> found;
    for (u64 r = 2; r < M; r += 2) {
        if (!apn_condition_check(n, m, r)) continue;
        if (found)
            throw invariant_error("APN identity has two even solutions for one m");
        found = r;
    }
    if (!found) throw invariant_error("APN identity has no even solution for this m");
    return *found;
}

// Exponents from divisors of n+1 / n-1: for m | n+1 (m != 1) with even
// quotient, r = (3^{n+1} - 1)/(3^m + 1); for m | n-1 with even quotient,
// r = (1 - 3^{n-1})/(1 + 3^m). These land in cosets already reachable via
// apn_exponent; they are listed separately because the divisor form is how
// the power-of-two subfamilies below arise.
enum class DivisorBranch { n_plus_1, n_minus_1 };

struct DivisorFamilyEntry {
    int m = 0;
    DivisorBranch branch = DivisorBranch::n_plus_1;
    u64 r = 0;
};

inline std::vector<DivisorFamilyEntry> divisor_family(int n) {
    if (n % 2 == 0) throw domain_error("divisor family requires odd n");
    const u64 M = detail::apn_modulus(n);
    std::vector<DivisorFamilyEntry> out;
    for (int m = 2; m <= n + 1; ++m) {
        if ((n + 1) % m != 0 || ((n + 1) / m) % 2 != 0) continue;
        u64 r = (detail::pow3(m) - 1) % M *
                detail::geom_sum_pow3(2 * m, (n + 1) / (2 * m), M) % M;
        out.push_back({m, DivisorBranch::n_plus_1, r});
    }
    for (int m = 1; m <= n - 1; ++m) {
        if ((n - 1) % m != 0 || ((n - 1) / m) % 2 != 0) continue;
        u64 s = (detail::pow3(m) - 1) % M *
                detail::geom_sum_pow3(2 * m, (n - 1) / (2 * m), M) % M;
        out.push_back({m, DivisorBranch::n_minus_1, (M - s) % M});
    }
    return out;
}

// Power-of-two specializations: m = (n+1)/2^l resp. (n-1)/2^l.
inline u64 pow2_np1(int n, int l) {
    if (n % 2 == 0) throw domain_error("requires odd n");
    if (l < 1 || l > 5) throw domain_error("l out of range");
    u64 span = u64(1) << l;
    if ((n + 1) % span != 0) throw domain_error("2^l must divide n + 1");
    const int m = int(u64(n + 1) / span);
    const u64 M = detail::apn_modulus(n);
    return (detail::pow3(m) - 1) % M * detail::geom_sum_pow3(2 * m, span / 2, M) % M;
}

inline u64 pow2_nm1(int n, int l) {
    if (n % 2 == 0) throw domain_error("requires odd n");
    if (l < 1 || l > 5) throw domain_error("l out of range");
    u64 span = u64(1) << l;
    if ((n - 1) % span != 0) throw domain_error("2^l must divide n - 1");
    const int m = int(u64(n - 1) / span);
    const u64 M = detail::apn_modulus(n);
    u64 s = (detail::pow3(m) - 1) % M * detail::geom_sum_pow3(2 * m, span / 2, M) % M;
    return (M - s) % M;
}

// m and n-m give linearly equivalent power maps: same full cyclotomic coset.
inline bool mirror_equivalence(int n, int m) {
    ApnWitness a = apn_exponent(n, m);
    ApnWitness b = apn_exponent(n, n - m);
    const u64 q = detail::apn_modulus(n) + 1;
    return exponent_class(i64(a.r), 3, q).coset_full ==
           exponent_class(i64(b.r), 3, q).coset_full;
}

}  // namespace chi3

#endif  // CHI3_APN_EXPONENTS_HPP
