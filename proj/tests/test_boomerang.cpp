#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "chi3/boomerang.hpp"

using namespace chi3;
using Nu = std::map<std::uint32_t, u64>;

TEST_CASE("grouped boomerang row matches the quadratic reference") {
    FieldCtx ctx = build_field(3, 3);
    for (FuncLabel label : {FuncLabel{FuncKind::binomial, 7, 1},
                            FuncLabel{FuncKind::binomial, 2, 1},
                            FuncLabel{FuncKind::binomial, 24, 1},
                            FuncLabel{FuncKind::power, 20, 1}}) {
        CAPTURE(label.r, int(label.kind));
        FuncTable f = tabulate(ctx, label.kind, label.r);
        for (u64 a = 1; a < ctx.q; ++a) {
            BoomRow fast = beta_row(ctx, f, elem(a));
            BoomRow slow = beta_row_reference(ctx, f, elem(a));
            REQUIRE(fast.counts == slow.counts);
        }
    }
    SECTION("one larger field, a = 1 only") {
        FieldCtx big = build_field(3, 5);
        FuncTable f = tabulate(big, FuncKind::binomial, 26);
        REQUIRE(beta_row(big, f, 1).counts == beta_row_reference(big, f, 1).counts);
    }
}

TEST_CASE("flat boomerang rows for the vanishing classes over F_27") {
    FieldCtx ctx = build_field(3, 3);
    for (i64 r : {7, 12}) {
        CAPTURE(r);
        BoomRow row = beta_row(ctx, tabulate(ctx, FuncKind::binomial, r), 1);
        for (u64 b = 1; b < ctx.q; ++b) REQUIRE(row.counts[b] == 0);
    }
}

TEST_CASE("frozen boomerang spectra") {
    SECTION("r = 3^3 - 3 over F_27: uniformly zero") {
        FieldCtx ctx = build_field(3, 3);
        BoomSpectrum s = boom_spectrum(ctx, tabulate(ctx, FuncKind::binomial, 24));
        CHECK(s.nu == Nu{{0, 26}});
        CHECK(s.beta == 0);
        CHECK(s.method == "shortcut");  // gcd(24, 26) = 2 and the row screens flat
        // forcing the full table walk gives the same answer
        BoomSpectrum full = boom_spectrum(ctx, tabulate(ctx, FuncKind::binomial, 24), false);
        CHECK(full.nu == s.nu);
        CHECK(full.method == "bct");
    }
    SECTION("r = 3^5 - 3 over F_243") {
        FieldCtx ctx = build_field(3, 5);
        BoomSpectrum s = boom_spectrum(ctx, tabulate(ctx, FuncKind::binomial, 240));
        CHECK(s.nu == Nu{{0, 182}, {1, 60}});
        CHECK(s.beta == 1);
        CHECK(s.method == "bct");  // shortcut applies but finds a witness
    }
    SECTION("r = 2 over F_243") {
        FieldCtx ctx = build_field(3, 5);
        BoomSpectrum s = boom_spectrum(ctx, tabulate(ctx, FuncKind::binomial, 2));
        CHECK(s.nu == Nu{{0, 182}, {1, 60}});
    }
    SECTION("nu covers every b != 0") {
        FieldCtx ctx = build_field(3, 5);
        BoomSpectrum s = boom_spectrum(ctx, tabulate(ctx, FuncKind::binomial, 16), false);
        u64 total = 0;
        for (auto [v, cnt] : s.nu) total += cnt;
        CHECK(total == ctx.q - 1);
    }
}

TEST_CASE("single-entry beta agrees with the row") {
    FieldCtx ctx = build_field(3, 3);
    FuncTable f = tabulate(ctx, FuncKind::binomial, 2);
    for (u64 a = 1; a < ctx.q; ++a) {
        BoomRow row = beta_row(ctx, f, elem(a));
        for (u64 b = 1; b < ctx.q; ++b)
            REQUIRE(beta(ctx, f, elem(a), elem(b)) == row.counts[b]);
    }
    CHECK_THROWS_AS(beta(ctx, f, 0, 1), domain_error);
    CHECK_THROWS_AS(beta(ctx, f, 1, 0), domain_error);
}

TEST_CASE("boomerang rows for a != 1 reduce to the a = 1 row") {
    SECTION("exhaustive over F_27") {
        FieldCtx ctx = build_field(3, 3);
        for (FuncLabel label : {FuncLabel{FuncKind::binomial, 2, 1},
                                FuncLabel{FuncKind::power, 20, 1}}) {
            FuncTable f = tabulate(ctx, label.kind, label.r);
            for (u64 a = 1; a < ctx.q; ++a)
                for (u64 b = 1; b < ctx.q; ++b)
                    REQUIRE(beta(ctx, f, elem(a), elem(b)) ==
                            beta_via_reduction(ctx, f, elem(a), elem(b)));
        }
    }
    SECTION("random spot checks over F_243") {
        FieldCtx ctx = build_field(3, 5);
        FuncTable f = tabulate(ctx, FuncKind::binomial, 16);
        std::mt19937 rng(5321);
        std::uniform_int_distribution<u64> dist(1, ctx.q - 1);
        for (int i = 0; i < 150; ++i) {
            elem a = elem(dist(rng)), b = elem(dist(rng));
            REQUIRE(beta(ctx, f, a, b) == beta_via_reduction(ctx, f, a, b));
        }
    }
}

TEST_CASE("beta-zero shortcut outcomes") {
    SECTION("confirmed: gcd 1 with a flat difference row") {
        FieldCtx ctx = build_field(3, 3);
        BetaZeroScreen s = beta_zero_shortcut(ctx, 7);  // gcd(7, 26) = 1
        CHECK(s.outcome == ShortcutOutcome::confirmed_zero);
        CHECK_FALSE(s.failing_b.has_value());
    }
    SECTION("witness: gcd 2 but a repeated difference") {
        FieldCtx ctx = build_field(3, 5);
        BetaZeroScreen s = beta_zero_shortcut(ctx, 2);  // gcd(2, 242) = 2
        REQUIRE(s.outcome == ShortcutOutcome::nonzero_with_witness);
        REQUIRE(s.failing_b.has_value());
        FuncTable f = tabulate(ctx, FuncKind::binomial, 2);
        CHECK(delta(ctx, f, 1, *s.failing_b) >= 2);
        CHECK(*s.failing_b != 0);
    }
    SECTION("inapplicable: gcd outside {1, 2}") {
        FieldCtx ctx = build_field(3, 3);
        CHECK(beta_zero_shortcut(ctx, 13).outcome == ShortcutOutcome::inapplicable);
    }
    SECTION("inapplicable: q = 1 mod 4") {
        FieldCtx ctx = build_field(5, 2);
        CHECK(beta_zero_shortcut(ctx, 3).outcome == ShortcutOutcome::inapplicable);
    }
}

TEST_CASE("boomerang cell decomposition") {
    FieldCtx ctx = build_field(3, 3);
    BijklBatch batch = bijkl_all(ctx, 24);
    FuncTable f = tabulate(ctx, FuncKind::binomial, 24);
    BoomRow row = beta_row(ctx, f, 1);
    REQUIRE(batch.beta.size() == ctx.q);
    for (u64 b = 1; b < ctx.q; ++b) {
        REQUIRE(batch.beta[b] == row.counts[b]);
        BijklCounts one = bijkl_decompose(ctx, 24, elem(b));
        REQUIRE(one.t == batch.tuples[b]);
        REQUIRE(one.boundary == batch.boundary[b]);
        REQUIRE(one.total() == row.counts[b]);
    }
    SECTION("sign cells partition the domain") {
        u64 interior = 0;
        for (u64 x = 0; x < ctx.q; ++x)
            if (sij_cell(ctx, elem(x)) >= 0) ++interior;
        CHECK(interior == ctx.q - 2);
    }
}

TEST_CASE("only four cells can fire for r = 3^n - 3, with exclusions") {
    for (int n : {3, 5}) {
        CAPTURE(n);
        FieldCtx ctx = build_field(3, n);
        i64 r = i64(ctx.q) - 3;
        BijklBatch batch = bijkl_all(ctx, r);
        auto cell = [](int i, int j, int k, int l) { return i * 8 + j * 4 + k * 2 + l; };
        for (u64 b = 1; b < ctx.q; ++b) {
            const auto& t = batch.tuples[b];
            u64 live = u64(t[cell(0, 0, 0, 1)]) + t[cell(0, 0, 1, 0)] +
                       t[cell(0, 1, 0, 0)] + t[cell(1, 0, 0, 0)];
            // the whole count is carried by those four cells: nothing in the
            // other twelve, nothing on the {0, -1} boundary
            REQUIRE(live == batch.beta[b]);
            REQUIRE(batch.beta[b] <= 1);
            // same-side pairs never co-occur
            REQUIRE(!(t[cell(0, 0, 0, 1)] && t[cell(0, 0, 1, 0)]));
            REQUIRE(!(t[cell(0, 1, 0, 0)] && t[cell(1, 0, 0, 0)]));
        }
    }
}
