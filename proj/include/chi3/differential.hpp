// Differential analysis: DDT rows delta_F(a,b), differential spectra,
// locally-PN/APN classification, and the S_ij / D_ij decompositions that the
// closed-form predicates are checked against.
#ifndef CHI3_DIFFERENTIAL_HPP
#define CHI3_DIFFERENTIAL_HPP

#include <array>
#include <map>
#include <optional>

#include "chi3/functions.hpp"

namespace chi3 {

struct DiffRow {
    elem a = 1;
    std::vector<std::uint32_t> counts;  // counts[b] = delta_F(a, b); sums to q
};

inline DiffRow delta_row(const FieldCtx& ctx, const FuncTable& F, elem a) {
    if (a == 0) throw domain_error("delta_row requires a != 0");
    DiffRow row;
    row.a = a;
    row.counts.assign(ctx.q, 0);
    if (a == 1) {
        for (u64 x = 0; x < ctx.q; ++x)
            ++row.counts[ctx.sub(F.values[ctx.add_one(elem(x))], F.values[x])];
    } else {
        for (u64 x = 0; x < ctx.q; ++x)
            ++row.counts[ctx.sub(F.values[ctx.add(elem(x), a)], F.values[x])];
    }
    return row;
}

inline std::uint32_t delta(const FieldCtx& ctx, const FuncTable& F, elem a, elem b) {
    if (a == 0) throw domain_error("delta requires a != 0");
    std::uint32_t c = 0;
    for (u64 x = 0; x < ctx.q; ++x)
        if (ctx.sub(F.values[ctx.add(elem(x), a)], F.values[x]) == b) ++c;
    return c;
}

// delta(a, b) looked up in the a = 1 row: b maps to b/a^r when chi(a) = 1 and
// to b/((-1)^(r+1) a^r) when chi(a) = -1. Power maps remap by b/a^r always
// (substituting x -> ax carries no character term).
inline elem reduce_b_differential(const FieldCtx& ctx, const FuncLabel& label,
                                  elem a, elem b) {
    elem ar = ctx.pow(a, label.r);
    if (label.kind == FuncKind::power || ctx.chi(a) == 1) return ctx.mul(b, ctx.inv(ar));
    bool r_even = reduce_exponent(label.r, ctx.q) % 2 == 0;
    elem denom = r_even ? ctx.neg(ar) : ar;  // (-1)^(r+1) a^r
    return ctx.mul(b, ctx.inv(denom));
}

inline std::uint32_t delta_via_reduction(const FieldCtx& ctx, const FuncTable& F,
                                         elem a, elem b) {
    if (a == 0) throw domain_error("delta_via_reduction requires a != 0");
    return delta(ctx, F, 1, reduce_b_differential(ctx, F.label, a, b));
}

struct DiffSpectrum {
    std::map<std::uint32_t, u64> omega;  // count value -> multiplicity over b
    std::uint32_t delta = 0;             // max count with positive multiplicity
};

// Spectrum from the a = 1 row alone; valid for power maps and binomials,
// whose delta(a, .) rows are permutations of the a = 1 row.
inline DiffSpectrum diff_spectrum(const FieldCtx& ctx, const FuncTable& F) {
    DiffRow row = delta_row(ctx, F, 1);
    DiffSpectrum s;
    for (u64 b = 0; b < ctx.q; ++b) ++s.omega[row.counts[b]];
    s.delta = s.omega.rbegin()->first;
    return s;
}

enum class LocalClass { PN, APN, locally_PN, locally_APN, none };

inline const char* to_string(LocalClass c) {
    switch (c) {
        case LocalClass::PN: return "PN";
        case LocalClass::APN: return "APN";
        case LocalClass::locally_PN: return "locally-PN";
        case LocalClass::locally_APN: return "locally-APN";
        default: return "none";
    }
}

struct LocalClassification {
    LocalClass cls = LocalClass::none;
    // For locally-PN: first b with count > 2 (the reason it is not APN).
    // For locally-APN: first b outside F_p with count 2 (not locally-PN).
    // For none: first b outside F_p with count > 2. Empty for PN/APN.
    std::optional<elem> witness;
};

inline LocalClassification classify_locally(const FieldCtx& ctx, const FuncTable& F) {
    DiffRow row = delta_row(ctx, F, 1);
    std::uint32_t max_all = 0, max_off = 0;
    for (u64 b = 0; b < ctx.q; ++b) {
        max_all = std::max(max_all, row.counts[b]);
        if (b >= u64(ctx.p)) max_off = std::max(max_off, row.counts[b]);
    }
    auto first_off_exceeding = [&](std::uint32_t bound) -> std::optional<elem> {
        for (u64 b = u64(ctx.p); b < ctx.q; ++b)
            if (row.counts[b] > bound) return elem(b);
        return std::nullopt;
    };
    if (max_all == 1) return {LocalClass::PN, std::nullopt};
    if (max_all == 2) return {LocalClass::APN, std::nullopt};
    if (max_off <= 1) {
        for (u64 b = 0; b < ctx.q; ++b)
            if (row.counts[b] > 2) return {LocalClass::locally_PN, elem(b)};
        return {LocalClass::locally_PN, std::nullopt};
    }
    if (max_off <= 2) return {LocalClass::locally_APN, first_off_exceeding(1)};
    return {LocalClass::none, first_off_exceeding(2)};
}

// Partition of F_q minus {0, -1} by the sign pattern (chi(x), chi(x+1)):
// S_ij holds the x with chi(x) = (-1)^i and chi(x+1) = (-1)^j.
struct SijPartition {
    std::array<std::array<u64, 2>, 2> size{};

    u64 s00() const { return size[0][0]; }
    u64 s01() const { return size[0][1]; }
    u64 s10() const { return size[1][0]; }
    u64 s11() const { return size[1][1]; }
};

inline SijPartition sij_partition(const FieldCtx& ctx) {
    SijPartition part;
    const elem minus_one = ctx.neg(1);
    for (u64 x = 0; x < ctx.q; ++x) {
        if (x == 0 || elem(x) == minus_one) continue;
        int i = ctx.chi(elem(x)) == 1 ? 0 : 1;
        int j = ctx.chi(ctx.add_one(elem(x))) == 1 ? 0 : 1;
        ++part.size[i][j];
    }
    return part;
}

// F_r(x) = x^r (1 + chi(x)) evaluated through the log tables; re must already
// be reduced into [0, q-2]. Shared by the D_ij/B_ijkl decompositions and the
// scan hot loops.
inline elem binomial_value(const FieldCtx& ctx, u64 re, elem x) {
    if (x == 0 || (ctx.log[x] & 1u)) return 0;
    return ctx.mul(ctx.exp[u64(ctx.log[x]) * re % (ctx.q - 1)], 2);
}

struct DijCounts {
    std::array<std::array<std::uint32_t, 2>, 2> d{};  // d[i][j] = D_ij(b)
    std::uint32_t at_zero = 0;      // solution at x = 0 (gives b = F_r(1))
    std::uint32_t at_minus_one = 0; // solution at x = -1

    u64 total() const { return u64(d[0][0]) + d[0][1] + d[1][0] + d[1][1] + at_zero + at_minus_one; }
};

// Solution counts of F_r(x+1) - F_r(x) = b split by the S_ij cell of x;
// x in {0, -1} is tallied separately (chi vanishes there, so the cells
// don't cover those two points).
inline DijCounts dij_decompose(const FieldCtx& ctx, i64 r, elem b) {
    if (r < 1) throw domain_error("dij_decompose requires r >= 1");
    const u64 re = u64(reduce_exponent(r, ctx.q));
    const elem minus_one = ctx.neg(1);
    DijCounts out;
    for (u64 x = 0; x < ctx.q; ++x) {
        elem diff = ctx.sub(binomial_value(ctx, re, ctx.add_one(elem(x))),
                            binomial_value(ctx, re, elem(x)));
        if (diff != b) continue;
        if (x == 0) { ++out.at_zero; continue; }
        if (elem(x) == minus_one) { ++out.at_minus_one; continue; }
        int i = ctx.chi(elem(x)) == 1 ? 0 : 1;
        int j = ctx.chi(ctx.add_one(elem(x))) == 1 ? 0 : 1;
        ++out.d[i][j];
    }
    return out;
}

// Same split for every b at once in a single pass over x. One entry per
// element id; entry b is meaningful for b != 0.
inline std::vector<DijCounts> dij_all(const FieldCtx& ctx, i64 r) {
    if (r < 1) throw domain_error("dij_all requires r >= 1");
    const u64 re = u64(reduce_exponent(r, ctx.q));
    const elem minus_one = ctx.neg(1);
    std::vector<DijCounts> out(ctx.q);
    for (u64 x = 0; x < ctx.q; ++x) {
        elem diff = ctx.sub(binomial_value(ctx, re, ctx.add_one(elem(x))),
                            binomial_value(ctx, re, elem(x)));
        DijCounts& slot = out[diff];
        if (x == 0) { ++slot.at_zero; continue; }
        if (elem(x) == minus_one) { ++slot.at_minus_one; continue; }
        int i = ctx.chi(elem(x)) == 1 ? 0 : 1;
        int j = ctx.chi(ctx.add_one(elem(x))) == 1 ? 0 : 1;
        ++slot.d[i][j];
    }
    return out;
}

}  // namespace chi3

#endif  // CHI3_DIFFERENTIAL_HPP
