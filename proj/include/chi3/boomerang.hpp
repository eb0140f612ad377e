// Boomerang analysis. beta_F(a, b) counts ordered pairs (x, y) with
// F(x) - F(y) = F(x+a) - F(y+a) = b, b != 0. The workhorse groups x by
// H(x) = F(x) - F(x+a) so a full row costs O(q + sum |G|^2) instead of
// O(q^2); a naive reference and a single-(a,b) query are kept for
// cross-checking.
#ifndef CHI3_BOOMERANG_HPP
#define CHI3_BOOMERANG_HPP

#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "chi3/differential.hpp"

namespace chi3 {

namespace detail {

inline constexpr std::uint32_t kNoEntry = 0xffffffffu;

// Counting-sorted chains of x sharing the same H(x) = F(x) - F(x + a).
struct HGroups {
    std::vector<std::uint32_t> head;  // head[h]: first x with H(x) = h
    std::vector<std::uint32_t> next;
};

inline HGroups h_groups(const FieldCtx& ctx, const FuncTable& F, elem a) {
    HGroups g;
    g.head.assign(ctx.q, kNoEntry);
    g.next.assign(ctx.q, kNoEntry);
    for (u64 x = 0; x < ctx.q; ++x) {
        elem h = ctx.sub(F.values[x], F.values[ctx.add(elem(x), a)]);
        g.next[x] = g.head[h];
        g.head[h] = std::uint32_t(x);
    }
    return g;
}

}  // namespace detail

struct BoomRow {
    elem a = 1;
    std::vector<std::uint32_t> counts;  // counts[b] = beta_F(a, b); counts[0] stays 0
};

inline BoomRow beta_row(const FieldCtx& ctx, const FuncTable& F, elem a) {
    if (a == 0) throw domain_error("beta_row requires a != 0");
    detail::HGroups g = detail::h_groups(ctx, F, a);
    BoomRow row;
    row.a = a;
    row.counts.assign(ctx.q, 0);
    std::vector<elem> members;
    for (u64 h = 0; h < ctx.q; ++h) {
        if (g.head[h] == detail::kNoEntry) continue;
        members.clear();
        for (std::uint32_t x = g.head[h]; x != detail::kNoEntry; x = g.next[x])
            members.push_back(x);
        if (members.size() < 2) continue;
        for (elem x : members)
            for (elem y : members) {
                elem d = ctx.sub(F.values[x], F.values[y]);
                if (d != 0) ++row.counts[d];
            }
    }
    return row;
}

// Literal transcription of the definition; O(q^2), for tests only.
inline BoomRow beta_row_reference(const FieldCtx& ctx, const FuncTable& F, elem a) {
    if (a == 0) throw domain_error("beta_row_reference requires a != 0");
    BoomRow row;
    row.a = a;
    row.counts.assign(ctx.q, 0);
    for (u64 x = 0; x < ctx.q; ++x)
        for (u64 y = 0; y < ctx.q; ++y) {
            elem b = ctx.sub(F.values[x], F.values[y]);
            if (b != 0 &&
                ctx.sub(F.values[ctx.add(elem(x), a)], F.values[ctx.add(elem(y), a)]) == b)
                ++row.counts[b];
        }
    return row;
}

// Single (a, b) query: bucket y by F(y), then for each x walk the bucket of
// F(x) - b checking H(y) = H(x). Linear-ish for the maps studied here (their
// value distributions keep the bucket walks short); degenerate exponents can
// push it toward O(q^2).
inline std::uint32_t beta(const FieldCtx& ctx, const FuncTable& F, elem a, elem b) {
    if (a == 0) throw domain_error("beta requires a != 0");
    if (b == 0) throw domain_error("beta is defined for b != 0 only");
    std::vector<std::uint32_t> head(ctx.q, detail::kNoEntry), next(ctx.q);
    for (u64 y = 0; y < ctx.q; ++y) {
        next[y] = head[F.values[y]];
        head[F.values[y]] = std::uint32_t(y);
    }
    std::uint32_t c = 0;
    for (u64 x = 0; x < ctx.q; ++x) {
        elem hx = ctx.sub(F.values[x], F.values[ctx.add(elem(x), a)]);
        elem want = ctx.sub(F.values[x], b);
        for (std::uint32_t y = head[want]; y != detail::kNoEntry; y = next[y])
            if (ctx.sub(F.values[y], F.values[ctx.add(elem(y), a)]) == hx) ++c;
    }
    return c;
}

// beta(a, b) looked up in the a = 1 row; the remap differs from the
// differential one by a sign: chi(a) = -1 sends b to b/((-1)^r a^r).
inline elem reduce_b_boomerang(const FieldCtx& ctx, const FuncLabel& label,
                               elem a, elem b) {
    elem ar = ctx.pow(a, label.r);
    if (label.kind == FuncKind::power || ctx.chi(a) == 1) return ctx.mul(b, ctx.inv(ar));
    bool r_even = reduce_exponent(label.r, ctx.q) % 2 == 0;
    elem denom = r_even ? ar : ctx.neg(ar);  // (-1)^r a^r
    return ctx.mul(b, ctx.inv(denom));
}

inline std::uint32_t beta_via_reduction(const FieldCtx& ctx, const FuncTable& F,
                                        elem a, elem b) {
    if (a == 0) throw domain_error("beta_via_reduction requires a != 0");
    if (b == 0) throw domain_error("beta is defined for b != 0 only");
    return beta(ctx, F, 1, reduce_b_boomerang(ctx, F.label, a, b));
}

// ------------------------------------------------------------------ shortcut
// For the u = 1 binomial F_r with q = 3 mod 4 and gcd(r, q-1) in {1, 2},
// beta = 0 is *equivalent* to a flat differential row: delta(1, b) <= 1 for
// all b != 0. Both directions hold under those hypotheses, so the O(q) screen
// below is decisive either way -- a clean row proves beta = 0 without touching
// the BCT, and a repeated b is a witness that beta >= 1. Outside the
// hypotheses the screen says nothing and the caller computes the full row.
enum class ShortcutOutcome { confirmed_zero, nonzero_with_witness, inapplicable };

struct BetaZeroScreen {
    ShortcutOutcome outcome = ShortcutOutcome::inapplicable;
    std::optional<elem> failing_b;  // the repeated b, when nonzero_with_witness
};

inline BetaZeroScreen beta_zero_shortcut(const FieldCtx& ctx, i64 r) {
    BetaZeroScreen out;
    if (ctx.q % 4 != 3) return out;
    const u64 re = u64(reduce_exponent(r, ctx.q));
    if (u64 d = std::gcd(re, ctx.q - 1); d != 1 && d != 2) return out;
    std::vector<std::uint8_t> seen(ctx.q, 0);
    for (u64 x = 0; x < ctx.q; ++x) {
        elem diff = ctx.sub(binomial_value(ctx, re, ctx.add_one(elem(x))),
                            binomial_value(ctx, re, elem(x)));
        if (diff == 0) continue;
        if (seen[diff]) {
            out.outcome = ShortcutOutcome::nonzero_with_witness;
            out.failing_b = diff;
            return out;
        }
        seen[diff] = 1;
    }
    out.outcome = ShortcutOutcome::confirmed_zero;
    return out;
}

struct BoomSpectrum {
    std::map<std::uint32_t, u64> nu;  // count value -> multiplicity over b != 0
    std::uint32_t beta = 0;
    std::string method;  // "bct" (full row) or "shortcut" (zero row proven)
};

inline BoomSpectrum boom_spectrum(const FieldCtx& ctx, const FuncTable& F,
                                  bool allow_shortcut = true) {
    BoomSpectrum s;
    if (allow_shortcut && F.label.kind == FuncKind::binomial && F.label.u == 1 &&
        beta_zero_shortcut(ctx, F.label.r).outcome == ShortcutOutcome::confirmed_zero) {
        s.nu[0] = ctx.q - 1;
        s.beta = 0;
        s.method = "shortcut";
        return s;
    }
    BoomRow row = beta_row(ctx, F, 1);
    for (u64 b = 1; b < ctx.q; ++b) ++s.nu[row.counts[b]];
    s.beta = s.nu.rbegin()->first;
    s.method = "bct";
    return s;
}

// ------------------------------------------------- pair-class decompositions
// Solutions (x, y) of the a = 1 system split by the S_ij cell of x and the
// S_kl cell of y; pairs touching x or y in {0, -1} land in `boundary`.

inline int sij_cell(const FieldCtx& ctx, elem x) {  // -1 for x in {0, -1}
    if (x == 0 || x == ctx.neg(1)) return -1;
    int i = ctx.chi(x) == 1 ? 0 : 1;
    int j = ctx.chi(ctx.add_one(x)) == 1 ? 0 : 1;
    return i * 2 + j;
}

struct BijklCounts {
    std::array<std::uint32_t, 16> t{};  // t[i*8 + j*4 + k*2 + l]
    std::uint32_t boundary = 0;

    std::uint32_t at(int i, int j, int k, int l) const { return t[i * 8 + j * 4 + k * 2 + l]; }
    u64 total() const {
        return std::accumulate(t.begin(), t.end(), u64(boundary));
    }
};

struct BijklBatch {
    std::vector<std::array<std::uint32_t, 16>> tuples;  // indexed by b
    std::vector<std::uint32_t> boundary;
    std::vector<std::uint32_t> beta;  // the full beta(1, .) row, for free
};

inline BijklBatch bijkl_all(const FieldCtx& ctx, i64 r) {
    FuncTable F = tabulate(ctx, FuncKind::binomial, r, 1);
    std::vector<int> cell(ctx.q);
    for (u64 x = 0; x < ctx.q; ++x) cell[x] = sij_cell(ctx, elem(x));
    detail::HGroups g = detail::h_groups(ctx, F, 1);
    BijklBatch out;
    out.tuples.assign(ctx.q, {});
    out.boundary.assign(ctx.q, 0);
    out.beta.assign(ctx.q, 0);
    std::vector<elem> members;
    for (u64 h = 0; h < ctx.q; ++h) {
        if (g.head[h] == detail::kNoEntry) continue;
        members.clear();
        for (std::uint32_t x = g.head[h]; x != detail::kNoEntry; x = g.next[x])
            members.push_back(x);
        if (members.size() < 2) continue;
        for (elem x : members)
            for (elem y : members) {
                elem b = ctx.sub(F.values[x], F.values[y]);
                if (b == 0) continue;
                ++out.beta[b];
                if (cell[x] < 0 || cell[y] < 0)
                    ++out.boundary[b];
                else
                    ++out.tuples[b][cell[x] * 4 + cell[y]];
            }
    }
    return out;
}

inline BijklCounts bijkl_decompose(const FieldCtx& ctx, i64 r, elem b) {
    if (b == 0) throw domain_error("bijkl_decompose requires b != 0");
    BijklBatch batch = bijkl_all(ctx, r);
    BijklCounts out;
    out.t = batch.tuples[b];
    out.boundary = batch.boundary[b];
    return out;
}

}  // namespace chi3

#endif  // CHI3_BOOMERANG_HPP
