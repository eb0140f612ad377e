// Exact arithmetic in F_{p^n} for odd p, built around log/antilog tables and
// the quadratic character chi. Element ids encode polynomial-basis coefficient
// vectors in base p (id 0 = zero, id 1 = one, ids 0..p-1 = the prime subfield).
#ifndef CHI3_FIELD_HPP
#define CHI3_FIELD_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chi3 {

using elem = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Exit-code contract of the frontend: 1 / 2 / 3 respectively.
class domain_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class invariant_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class resource_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr u64 kDefaultMemoryCap = 43046721;  // 3^16 element ids

namespace detail {

inline u64 pow3(unsigned e) {
    u64 v = 1;
    while (e--) v *= 3;
    return v;
}

// Dense polynomials over F_p, coefficient digits constant term first.
using poly = std::vector<std::uint8_t>;

inline void poly_trim(poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline poly poly_mul(const poly& a, const poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] += int(a[i]) * int(b[j]);
    poly out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        out[i] = std::uint8_t(acc[i] % p);
    poly_trim(out);
    return out;
}

// Remainder of a by m (any nonzero leading digit; gcd feeds non-monic
// divisors). A nonzero constant m divides everything.
inline poly poly_rem(poly a, const poly& m, int p) {
    poly_trim(a);
    if (m.size() == 1) return {};
    int inv_lead = 1;
    for (int k = 1; k < p; ++k)
        if (k * int(m.back()) % p == 1) { inv_lead = k; break; }
    while (a.size() >= m.size()) {
        int lead = int(a.back()) * inv_lead % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            int v = int(a[shift + i]) - lead * int(m[i]);
            a[shift + i] = std::uint8_t(((v % p) + p) % p);
        }
        poly_trim(a);
    }
    return a;
}

inline bool poly_divides(const poly& d, const poly& a, int p) {
    return poly_rem(a, d, p).empty();
}

inline poly poly_powmod(poly base, u64 e, const poly& m, int p) {
    poly r{1};
    base = poly_rem(std::move(base), m, p);
    while (e) {
        if (e & 1) r = poly_rem(poly_mul(r, base, p), m, p);
        base = poly_rem(poly_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

inline poly poly_gcd(poly a, poly b, int p) {
    while (!b.empty()) {
        poly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        // make monic: multiply by inverse of leading digit (p prime)
        int lead = a.back(), inv = 1;
        for (int k = 1; k < p; ++k)
            if (k * lead % p == 1) { inv = k; break; }
        for (auto& d : a) d = std::uint8_t(int(d) * inv % p);
    }
    return a;
}

inline std::string poly_to_string(const poly& f) {
    if (f.empty()) return "0";
    std::string s;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) { s += std::to_string(int(f[i])); continue; }
        if (f[i] != 1) s += std::to_string(int(f[i])) + "*";
        s += "x";
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

inline std::vector<u64> prime_factors(u64 v) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= v; ++d)
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    if (v > 1) out.push_back(v);
    return out;
}

// Rabin irreducibility: f (monic, degree n) is irreducible over F_p iff
// x^(p^n) == x mod f and gcd(x^(p^(n/t)) - x, f) = 1 for every prime t | n.
inline bool is_irreducible(const poly& f, int p) {
    int n = int(f.size()) - 1;
    if (n < 1) return false;
    poly x{0, 1};
    auto x_pow_p_k = [&](int k) {  // x^(p^k) mod f
        poly r = x;
        for (int i = 0; i < k; ++i) r = poly_powmod(r, u64(p), f, p);
        return r;
    };
    poly t = x_pow_p_k(n);  // must equal x
    {
        poly diff = t;
        // subtract x
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = std::uint8_t((int(diff[1]) + p - 1) % p);
        poly_trim(diff);
        if (!poly_rem(diff, f, p).empty()) return false;
    }
    for (u64 tprime : prime_factors(u64(n))) {
        poly g = x_pow_p_k(int(n / tprime));
        if (g.size() < 2) g.resize(2, 0);
        g[1] = std::uint8_t((int(g[1]) + p - 1) % p);
        poly_trim(g);
        if (poly_gcd(f, g, p).size() != 1) return false;
    }
    return true;
}

// Smallest-degree monic divisor (necessarily irreducible), by trial division.
// Only used to name the failing factor in construction error messages.
inline std::optional<poly> find_factor(const poly& f, int p) {
    int n = int(f.size()) - 1;
    for (int d = 1; d <= n / 2; ++d) {
        u64 count = 1;
        for (int i = 0; i < d; ++i) count *= u64(p);
        for (u64 k = 0; k < count; ++k) {
            poly cand(d + 1);
            u64 kk = k;
            for (int i = 0; i < d; ++i) { cand[i] = std::uint8_t(kk % p); kk /= p; }
            cand[d] = 1;
            if (poly_divides(cand, f, p)) return cand;
        }
    }
    return std::nullopt;
}

}  // namespace detail

struct FieldCtx {
    int p = 3;
    int n = 1;
    u64 q = 3;
    std::vector<std::uint8_t> modulus;  // n+1 digits, constant term first, monic
    elem gen = 0;
    std::vector<elem> log;   // size q; log[0] unused
    std::vector<elem> exp;   // size q-1; exp[0] = 1, exp[1] = gen
    std::vector<elem> negt;  // size q; additive inverse by id

    u64 half() const { return (q - 1) / 2; }

    // --- id <-> digit-vector plumbing -------------------------------------
    detail::poly to_poly(elem a) const {
        detail::poly d;
        d.reserve(std::size_t(n));
        while (a) { d.push_back(std::uint8_t(a % unsigned(p))); a /= unsigned(p); }
        return d;
    }
    elem from_poly(const detail::poly& d) const {
        elem id = 0;
        for (std::size_t i = d.size(); i-- > 0;) id = id * elem(p) + d[i];
        return id;
    }
    void check_id(elem a) const {
        if (u64(a) >= q) throw domain_error("element id " + std::to_string(a) +
                                            " out of range for q=" + std::to_string(q));
    }

    // --- arithmetic --------------------------------------------------------
    // Digit-wise, table-free. O(n) in the extension degree.
    elem add(elem a, elem b) const {
        elem out = 0, m = 1;
        const elem up = elem(p);
        while (a || b) {
            elem s = a % up + b % up;
            if (s >= up) s -= up;
            out += s * m;
            a /= up;
            b /= up;
            m *= up;
        }
        return out;
    }
    elem neg(elem a) const { return negt[a]; }
    elem sub(elem a, elem b) const { return add(a, negt[b]); }
    // x + 1 touches only the constant digit: O(1), used in the scan hot loops.
    elem add_one(elem a) const {
        return (a % elem(p) != elem(p) - 1) ? a + 1 : a - (elem(p) - 1);
    }

    elem mul(elem a, elem b) const {
        if (a == 0 || b == 0) return 0;
        u64 s = u64(log[a]) + u64(log[b]);
        if (s >= q - 1) s -= q - 1;
        return exp[s];
    }
    elem inv(elem a) const {
        if (a == 0) throw domain_error("inv(0) is undefined");
        elem l = log[a];
        return exp[l == 0 ? 0 : elem(q - 1) - l];
    }
    // e may be negative or exceed q-1; reduced mod q-1 for nonzero bases.
    elem pow(elem a, i64 e) const {
        i64 m = i64(q - 1);
        i64 re = e % m;
        if (re < 0) re += m;
        if (a == 0) {
            if (e == 0) return 1;
            if (re == 0)
                throw domain_error("pow(0, e) with e = 0 mod q-1, e != 0: "
                                   "not a power map at 0");
            return 0;
        }
        if (re == 0) return 1;
        return exp[u64(log[a]) * u64(re) % (q - 1)];
    }
    int chi(elem a) const {
        if (a == 0) return 0;
        return (log[a] & 1u) ? -1 : 1;
    }
    bool in_prime_field(elem a) const { return a < elem(p); }

    // Reference multiplication straight from the polynomial representation;
    // the test suite checks it against the table path.
    elem mul_poly_reference(elem a, elem b) const {
        return from_poly(detail::poly_rem(
            detail::poly_mul(to_poly(a), to_poly(b), p),
            detail::poly(modulus.begin(), modulus.end()), p));
    }

    std::string modulus_string() const {
        std::string s;
        for (auto d : modulus) s += char('0' + d);
        return s;
    }
};

// Digit string (constant term first) -> digit vector. Rejects junk.
inline std::vector<std::uint8_t> parse_digits(const std::string& s, int p) {
    std::vector<std::uint8_t> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c < '0' || c >= char('0' + p))
            throw domain_error("digit '" + std::string(1, c) +
                               "' out of range for base " + std::to_string(p));
        out.push_back(std::uint8_t(c - '0'));
    }
    return out;
}

inline FieldCtx build_field(int p, int n,
                            std::optional<std::vector<std::uint8_t>> modulus = std::nullopt,
                            u64 memory_cap = kDefaultMemoryCap) {
    using namespace detail;
    if (p < 3 || p % 2 == 0) throw domain_error("p must be an odd prime");
    for (int d = 3; d * d <= p; d += 2)
        if (p % d == 0) throw domain_error("p must be an odd prime; " +
                                           std::to_string(p) + " = " + std::to_string(d) +
                                           "*" + std::to_string(p / d));
    if (n < 1) throw domain_error("extension degree must be >= 1");

    u64 q = 1;
    for (int i = 0; i < n; ++i) {
        if (q > memory_cap / u64(p) + 1) { q = memory_cap + 1; break; }
        q *= u64(p);
    }
    if (q > memory_cap)
        throw resource_error("q = " + std::to_string(p) + "^" + std::to_string(n) +
                             " exceeds the memory cap of " + std::to_string(memory_cap) +
                             " elements");

    FieldCtx ctx;
    ctx.p = p;
    ctx.n = n;
    ctx.q = q;

    poly f;
    if (modulus) {
        f.assign(modulus->begin(), modulus->end());
        if (int(f.size()) != n + 1)
            throw domain_error("modulus must have degree " + std::to_string(n) +
                               " (" + std::to_string(n + 1) + " digits)");
        for (auto d : f)
            if (d >= p) throw domain_error("modulus digit out of range for base p");
        if (f.back() != 1)
            throw domain_error("modulus must be monic (leading digit 1)");
        if (n > 1 && !is_irreducible(f, p)) {
            auto factor = find_factor(f, p);
            std::string msg = "modulus " + poly_to_string(f) + " is reducible over F_" +
                              std::to_string(p);
            if (factor) msg += ": divisible by " + poly_to_string(*factor);
            throw domain_error(msg);
        }
    } else {
        // Deterministic default: smallest monic irreducible, candidates ordered
        // by the digit tuple (c_{n-1}, ..., c_0) ascending.
        u64 total = q;  // p^n candidates for the n free digits
        for (u64 k = 0; k < total; ++k) {
            poly cand(std::size_t(n) + 1);
            u64 kk = k;
            for (int i = 0; i < n; ++i) { cand[i] = std::uint8_t(kk % u64(p)); kk /= u64(p); }
            cand[n] = 1;
            bool ok = (n == 1) ? true : is_irreducible(cand, p);
            if (ok) { f = cand; break; }
        }
    }
    ctx.modulus.assign(f.begin(), f.end());

    // negation table: digit-wise p-complement
    ctx.negt.resize(q);
    for (u64 a = 0; a < q; ++a) {
        elem out = 0, m = 1, x = elem(a);
        while (x) {
            elem d = x % elem(p);
            out += (d ? elem(p) - d : 0) * m;
            x /= elem(p);
            m *= elem(p);
        }
        ctx.negt[a] = out;
    }

    // Generator: smallest id of multiplicative order q-1, found by checking
    // g^((q-1)/t) != 1 for each prime t | q-1 with table-free powering.
    auto factors = prime_factors(q - 1);
    const poly fm = f;
    auto is_primitive = [&](elem g) {
        poly gp = ctx.to_poly(g);
        if (gp.empty()) return false;
        for (u64 t : factors) {
            poly r = poly_powmod(gp, (q - 1) / t, fm, p);
            if (r.size() == 1 && r[0] == 1) return false;
        }
        return true;
    };
    elem g = 0;
    for (u64 cand = 2; cand < q; ++cand)
        if (is_primitive(elem(cand))) { g = elem(cand); break; }
    if (g == 0 && q == 3) g = 2;
    if (g == 0) throw invariant_error("no multiplicative generator found (impossible)");
    ctx.gen = g;

    // exp chain by repeated multiplication with gen; log is its inverse.
    ctx.exp.resize(q - 1);
    ctx.log.assign(q, 0);
    poly cur{1};
    poly gp = ctx.to_poly(g);
    for (u64 k = 0; k < q - 1; ++k) {
        elem id = ctx.from_poly(cur);
        ctx.exp[k] = id;
        ctx.log[id] = elem(k);
        cur = poly_rem(poly_mul(cur, gp, p), fm, p);
    }
    if (!(cur.size() == 1 && cur[0] == 1))
        throw invariant_error("generator order verification failed (impossible)");
    return ctx;
}

inline FieldCtx build_field(int p, int n, const std::string& modulus_digits,
                            u64 memory_cap = kDefaultMemoryCap) {
    return build_field(p, n, parse_digits(modulus_digits, p), memory_cap);
}

}  // namespace chi3

#endif  // CHI3_FIELD_HPP
