// Closed-form predictions: character sums, spectra, and the per-b solution
// predicates for the three studied exponent families. Everything here is a
// *prediction* -- the test suite holds each one against the brute-force
// decompositions in differential.hpp / boomerang.hpp. The ops stay total and
// assertion-free, except quad_charsum_check which is itself the assertion.

#ifndef CHI3_CLOSED_FORMS_HPP
#define CHI3_CLOSED_FORMS_HPP

#include <cmath>

#include "chi3/differential.hpp"

namespace chi3 {

namespace detail {

inline u64 isqrt(u64 v) {
    u64 r = u64(std::sqrt(double(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace detail

// The four sums that drive the boomerang spectrum of F_{3^n - 3}:
//
//   gamma1           = sum chi(u (u^2+1)) chi(u^4 + u^3 - 1)
//   gamma2           = sum chi(u (1-u^2)) chi(u^4 + u^3 - 1)
//   quartic_sum      = sum chi(u^4 + u^3 - 1)                    (= -1, n odd)
//   quartic_pair_sum = gamma1 + sum chi(u^4-1) chi(u^4+u^3-1)    (= -1, n odd)
//
// weil_bound = 6 floor(sqrt(3^n)) is carried along as context: |gamma1| and
// |gamma2| must sit inside it.
struct CharSumReport {
    int n = 0;
    i64 gamma1 = 0;
    i64 gamma2 = 0;
    i64 quartic_sum = 0;
    i64 quartic_pair_sum = 0;
    i64 weil_bound = 0;
};

inline CharSumReport gamma_sums(const FieldCtx& ctx) {
    if (ctx.p != 3) throw domain_error("character sums are specialized to p = 3");
    if (ctx.n % 2 == 0) throw domain_error("character sums require odd n");
    CharSumReport rep;
    rep.n = ctx.n;
    i64 g1 = 0, g2 = 0, quart = 0, cross = 0;
    for (u64 v = 0; v < ctx.q; ++v) {
        const elem x = elem(v);
        const elem x2 = ctx.mul(x, x);
        const elem x3 = ctx.mul(x2, x);
        const elem x4 = ctx.mul(x2, x2);
        const int cq = ctx.chi(ctx.sub(ctx.add(x4, x3), 1));
        if (cq == 0) continue;
        g1 += cq * ctx.chi(ctx.mul(x, ctx.add_one(x2)));
        g2 += cq * ctx.chi(ctx.mul(x, ctx.sub(1, x2)));
        quart += cq;
        cross += cq * ctx.chi(ctx.sub(x4, 1));
    }
    rep.gamma1 = g1;
    rep.gamma2 = g2;
    rep.quartic_sum = quart;
    rep.quartic_pair_sum = g1 + cross;
    rep.weil_bound = 6 * i64(detail::isqrt(ctx.q));
    return rep;
}

// Boomerang spectrum of F_{3^n - 3} from the two gamma sums alone:
// nu1 = (3^n + 1 + 2 gamma1 + gamma2) / 4 and nu0 = q - 1 - nu1. Non-integer
// or negative values would falsify either the closed form or the sums, so
// they raise rather than round.
struct NuPair {
    u64 nu0 = 0;
    u64 nu1 = 0;
};

inline NuPair nu_from_gamma(int n, i64 gamma1, i64 gamma2) {
    if (n < 3 || n % 2 == 0) throw domain_error("spectrum closed form needs odd n >= 3");
    const i64 q = i64(detail::pow3(unsigned(n)));
    const i64 num1 = q + 1 + 2 * gamma1 + gamma2;
    const i64 num0 = 3 * q - 5 - 2 * gamma1 - gamma2;
    if (num1 < 0 || num0 < 0 || num1 % 4 != 0 || num0 % 4 != 0)
        throw invariant_error("closed-form boomerang spectrum is not a pair of non-negative integers");
    NuPair nu{u64(num0 / 4), u64(num1 / 4)};
    if (nu.nu0 + nu.nu1 != u64(q) - 1)
        throw invariant_error("closed-form boomerang spectrum does not sum to q - 1");
    return nu;
}

// Predicted delta(1, b) of the APN power map x^r attached to parameter m:
// 1 on the prime field, else 2 exactly when chi(b^{3^m + 1} - 1) = -1.
inline std::uint32_t apn_ddt_prediction(const FieldCtx& ctx, int m, elem b) {
    if (ctx.in_prime_field(b)) return 1;
    const elem t = ctx.pow(b, i64(detail::pow3(unsigned(m)) + 1));
    return ctx.chi(ctx.sub(t, 1)) == -1 ? 2 : 0;
}

// Differential spectrum shared by every locally-PN binomial here:
// one b reaches (q+1)/4, everything else is 0/1.
inline DiffSpectrum locally_pn_spectrum(u64 q) {
    if (q % 4 != 3) throw domain_error("spectrum requires q = 3 mod 4");
    DiffSpectrum s;
    s.delta = std::uint32_t((q + 1) / 4);
    s.omega[0] = (q - 3) / 4;
    s.omega[1] = (3 * q - 1) / 4;
    s.omega[s.delta] += 1;
    return s;
}

// Differential spectrum of an APN power map x^r over F_{3^n}, n odd.
inline DiffSpectrum apn_spectrum_closed(int n) {
    if (n % 2 == 0) throw domain_error("APN spectrum closed form needs odd n");
    const u64 q = detail::pow3(unsigned(n));
    DiffSpectrum s;
    s.delta = 2;
    s.omega[0] = (q - 3) / 2;
    s.omega[1] = 3;
    s.omega[2] = (q - 3) / 2;
    return s;
}

// Sizes of the sign-pattern cells of F_q minus {0, -1}.
inline SijPartition sij_sizes_closed(u64 q) {
    SijPartition part;
    if (q % 4 == 1) {
        part.size[0][0] = (q - 5) / 4;
        part.size[0][1] = part.size[1][0] = part.size[1][1] = (q - 1) / 4;
    } else {
        part.size[0][0] = part.size[1][0] = part.size[1][1] = (q - 3) / 4;
        part.size[0][1] = (q + 1) / 4;
    }
    return part;
}

// Per-b solution cells for the binomial built on the APN exponent of
// parameter m. Only the off-diagonal cells can be hit, each at most once:
//
//   D01(b) = 1  iff  chi(b) =  1 and chi(b^{(3^m+1)/2} + 1) = -1
//   D10(b) = 1  iff  chi(b) = -1 and chi(b^{(3^m+1)/2} + (-1)^m) = (-1)^m
struct SidePrediction {
    std::uint32_t d01 = 0;
    std::uint32_t d10 = 0;
};

inline SidePrediction side_class_prediction(const FieldCtx& ctx, int m, elem b) {
    SidePrediction out;
    const elem t = ctx.pow(b, i64((detail::pow3(unsigned(m)) + 1) / 2));
    const int sign_m = (m % 2 == 0) ? 1 : -1;
    if (ctx.chi(b) == 1 && ctx.chi(ctx.add_one(t)) == -1) out.d01 = 1;
    const elem shifted = sign_m == 1 ? ctx.add_one(t) : ctx.sub(t, 1);
    if (ctx.chi(b) == -1 && ctx.chi(shifted) == sign_m) out.d10 = 1;
    return out;
}

// Per-b solution-cell conditions for r = 2*3^l + 1 with l = (n-1)/2, via
// t = b^{2*3^{l+1} - 3}:
//
//   D00(b) = 1  if   chi(b (t+1)) =  1
//   D01(b) = 1  iff  chi(b) =  1 and chi(t+1) = -1
//   D10(b) = 1  iff  chi(b) = -1 and chi(t+1) =  1
//
// The off-diagonal conditions are exact. The D00 condition is necessary but
// NOT sufficient: it also fires on the (q-3)/4 values of b with no solution
// at all (delta(1,b) = 0), because the underlying 2-to-1 difference map
// reaches only part of the character class the condition describes. Callers
// comparing against measured cells must expect exactly that overshoot.
struct MidPrediction {
    std::uint32_t d00 = 0;
    std::uint32_t d01 = 0;
    std::uint32_t d10 = 0;
};

inline MidPrediction mid_exponent_prediction(const FieldCtx& ctx, elem b) {
    MidPrediction out;
    const int l = (ctx.n - 1) / 2;
    const elem t = ctx.pow(b, i64(2 * detail::pow3(unsigned(l + 1)) - 3));
    const elem t1 = ctx.add_one(t);
    if (ctx.chi(ctx.mul(b, t1)) == 1) out.d00 = 1;
    if (ctx.chi(b) == 1 && ctx.chi(t1) == -1) out.d01 = 1;
    if (ctx.chi(b) == -1 && ctx.chi(t1) == 1) out.d10 = 1;
    return out;
}

// The four boomerang-system cells that can fire for r = 3^n - 3, each 0/1,
// driven by y = b^{(3^n+1)/4} and e = (3^n+1)/4:
//
//   B0001 = 1 iff chi(b) = -1, chi(y+1) = chi(y+b) = 1, chi(y (y+b)^e - (y+1)) = 1
//   B0010 = 1 iff chi(b) = chi(y-1) = chi(y-b) = -1,    chi(y (y-b)^e + (y-1)) = 1
//   B0100 = 1 iff chi(b) = 1, chi(y+b) = chi(y-1) = -1, chi(y (y+b)^e + (y-1)) = 1
//   B1000 = 1 iff chi(b) = chi(y+1) = chi(y-b) = 1,     chi(y (y-b)^e - (y+1)) = 1
struct BoomTuplePrediction {
    std::uint32_t b0001 = 0;
    std::uint32_t b0010 = 0;
    std::uint32_t b0100 = 0;
    std::uint32_t b1000 = 0;
};

inline BoomTuplePrediction boom_tuple_prediction(const FieldCtx& ctx, elem b) {
    if (b == 0) throw domain_error("boomerang tuple prediction needs b != 0");
    BoomTuplePrediction out;
    const i64 e = i64((ctx.q + 1) / 4);
    const elem y = ctx.pow(b, e);
    const elem yp1 = ctx.add_one(y);
    const elem ym1 = ctx.sub(y, 1);
    const elem ypb = ctx.add(y, b);
    const elem ymb = ctx.sub(y, b);
    const int cb = ctx.chi(b);
    if (cb == -1 && ctx.chi(yp1) == 1 && ctx.chi(ypb) == 1 &&
        ctx.chi(ctx.sub(ctx.mul(y, ctx.pow(ypb, e)), yp1)) == 1)
        out.b0001 = 1;
    if (cb == -1 && ctx.chi(ym1) == -1 && ctx.chi(ymb) == -1 &&
        ctx.chi(ctx.add(ctx.mul(y, ctx.pow(ymb, e)), ym1)) == 1)
        out.b0010 = 1;
    if (cb == 1 && ctx.chi(ypb) == -1 && ctx.chi(ym1) == -1 &&
        ctx.chi(ctx.add(ctx.mul(y, ctx.pow(ypb, e)), ym1)) == 1)
        out.b0100 = 1;
    if (cb == 1 && ctx.chi(yp1) == 1 && ctx.chi(ymb) == 1 &&
        ctx.chi(ctx.sub(ctx.mul(y, ctx.pow(ymb, e)), yp1)) == 1)
        out.b1000 = 1;
    return out;
}

// Direct evaluation of sum chi(a2 x^2 + a1 x + a0), asserted against the
// closed form: -chi(a2) when the discriminant a1^2 - 4 a0 a2 is nonzero,
// (q-1) chi(a2) when it vanishes.
inline i64 quad_charsum_check(const FieldCtx& ctx, elem a2, elem a1, elem a0) {
    if (a2 == 0) throw domain_error("quadratic character sum needs a2 != 0");
    i64 sum = 0;
    for (u64 v = 0; v < ctx.q; ++v) {
        const elem x = elem(v);
        sum += ctx.chi(ctx.add(ctx.mul(a2, ctx.mul(x, x)), ctx.add(ctx.mul(a1, x), a0)));
    }
    const elem four = elem(4 % ctx.p);
    const elem disc = ctx.sub(ctx.mul(a1, a1), ctx.mul(four, ctx.mul(a0, a2)));
    const i64 expect = disc == 0 ? i64(ctx.q - 1) * ctx.chi(a2) : -i64(ctx.chi(a2));
    if (sum != expect)
        throw invariant_error("quadratic character sum deviates from its closed form");
    return sum;
}

}  // namespace chi3

#endif  // CHI3_CLOSED_FORMS_HPP
