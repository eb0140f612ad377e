// The studied function families over F_{p^n}: power maps x^r and binomials
// F_{r,u}(x) = x^r (1 + u*chi(x)), plus the exponent bookkeeping (cyclotomic
// cosets, gcd class, algebraic degree) that drives their equivalence classes.
#ifndef CHI3_FUNCTIONS_HPP
#define CHI3_FUNCTIONS_HPP

#include <map>
#include <numeric>
#include <ostream>

#include "chi3/field.hpp"

namespace chi3 {

enum class FuncKind { power, binomial };

struct FuncLabel {
    FuncKind kind = FuncKind::power;
    i64 r = 1;
    elem u = 0;  // binomial coefficient; 0 for power maps
};

struct FuncTable {
    const FieldCtx* ctx = nullptr;
    FuncLabel label;
    std::vector<elem> values;  // indexed by element id

    elem operator()(elem x) const { return values[x]; }
};

inline i64 reduce_exponent(i64 e, u64 q) {
    i64 m = i64(q - 1);
    i64 r = e % m;
    return r < 0 ? r + m : r;
}

inline elem eval_power(const FieldCtx& ctx, i64 r, elem x) { return ctx.pow(x, r); }

// F_{r,u}(x) = x^r (1 + u*chi(x)); u = 0 degenerates to a power map and is
// rejected so the two families stay distinct at the call site.
inline elem eval_binomial(const FieldCtx& ctx, i64 r, elem u, elem x) {
    if (u == 0) throw domain_error("binomial with u = 0 is a power map; use eval_power");
    if (x == 0) return 0;
    elem factor = ctx.chi(x) == 1 ? ctx.add(1, u) : ctx.sub(1, u);
    if (factor == 0) return 0;
    return ctx.mul(ctx.pow(x, r), factor);
}

// Single O(q) pass walking the exp chain: x = exp[k] has x^r = exp[k*r mod q-1],
// maintained incrementally, so there is no per-element multiplication.
inline FuncTable tabulate(const FieldCtx& ctx, FuncKind kind, i64 r, elem u = 1) {
    if (kind == FuncKind::binomial && u == 0)
        throw domain_error("binomial with u = 0 is a power map; use eval_power");
    FuncTable F;
    F.ctx = &ctx;
    F.label = {kind, r, kind == FuncKind::power ? elem(0) : u};
    F.values.assign(ctx.q, 0);
    if (kind == FuncKind::power) F.values[0] = ctx.pow(0, r);

    const u64 m = ctx.q - 1;
    const u64 re = u64(reduce_exponent(r, ctx.q));
    if (kind == FuncKind::power) {
        u64 t = 0;
        for (u64 k = 0; k < m; ++k) {
            F.values[ctx.exp[k]] = ctx.exp[t];
            t += re;
            if (t >= m) t -= m;
        }
    } else {
        const elem fplus = ctx.add(1, u);   // factor when chi(x) = +1 (even log)
        const elem fminus = ctx.sub(1, u);  // factor when chi(x) = -1 (odd log)
        u64 t = 0;
        for (u64 k = 0; k < m; ++k) {
            const elem factor = (k & 1) ? fminus : fplus;
            F.values[ctx.exp[k]] = factor ? ctx.mul(ctx.exp[t], factor) : 0;
            t += re;
            if (t >= m) t -= m;
        }
    }
    return F;
}

// Orbit of r mod modulus_m under repeated multiplication, sorted ascending.
// The canonical representative of the orbit is its minimum.
inline std::vector<u64> coset(i64 r, u64 modulus_m, u64 multiplier) {
    if (modulus_m < 2) throw domain_error("coset modulus must be >= 2");
    i64 red = r % i64(modulus_m);
    if (red < 0) red += i64(modulus_m);
    std::vector<u64> orbit;
    u64 x = u64(red);
    do {
        orbit.push_back(x);
        x = (unsigned __int128)(x)*multiplier % modulus_m;
    } while (x != u64(red));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    return orbit;
}

// r with its cosets mod q-1 (power-map equivalence) and mod (q-1)/2 (the
// binomial identity F_r = F_{r+(q-1)/2}); canon is the half-coset minimum.
struct ExponentClass {
    i64 r = 1;
    std::vector<u64> coset_full;
    std::vector<u64> coset_half;
    u64 canon = 0;
};

inline ExponentClass exponent_class(i64 r, int p, u64 q) {
    ExponentClass c;
    c.r = r;
    c.coset_full = coset(r, q - 1, u64(p));
    c.coset_half = coset(r, (q - 1) / 2, u64(p));
    c.canon = c.coset_half.front();
    return c;
}

inline int digit_sum(u64 e, int p) {
    int s = 0;
    while (e) {
        s += int(e % u64(p));
        e /= u64(p);
    }
    return s;
}

// Degree of the univariate expansion F_r = x^e1 + x^e2 with e1 = r and
// e2 = r + (q-1)/2, exponents taken in [1, q-1]; the degree of a monomial
// x^e is the base-p digit sum of e.
inline int algebraic_degree_binomial(const FieldCtx& ctx, i64 r) {
    const u64 half = ctx.half();
    i64 rh = r % i64(half);
    if (rh == 0)
        throw domain_error("degenerate binomial: r = 0 mod (q-1)/2");
    u64 e1 = u64(reduce_exponent(r, ctx.q));
    u64 e2 = u64(reduce_exponent(r + i64(half), ctx.q));
    if (e1 == 0) e1 = ctx.q - 1;
    if (e2 == 0) e2 = ctx.q - 1;
    return std::max(digit_sum(e1, ctx.p), digit_sum(e2, ctx.p));
}

inline u64 gcd_class(i64 r, u64 q) {
    return std::gcd(u64(reduce_exponent(r, q)), q - 1);
}

// CSV export: one JSON header line with the label metadata, then
// input_id,output_id rows.
inline void write_csv(const FuncTable& F, std::ostream& os) {
    const FieldCtx& ctx = *F.ctx;
    os << "{\"kind\":\"" << (F.label.kind == FuncKind::power ? "power" : "binomial")
       << "\",\"r\":" << F.label.r << ",\"u\":" << F.label.u << ",\"p\":" << ctx.p
       << ",\"n\":" << ctx.n << ",\"q\":" << ctx.q << ",\"modulus\":\""
       << ctx.modulus_string() << "\"}\n";
    os << "input_id,output_id\n";
    for (u64 x = 0; x < ctx.q; ++x) os << x << "," << F.values[x] << "\n";
}

}  // namespace chi3

#endif  // CHI3_FUNCTIONS_HPP
