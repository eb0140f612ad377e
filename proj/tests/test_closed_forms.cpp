#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "chi3/apn_exponents.hpp"
#include "chi3/boomerang.hpp"
#include "chi3/closed_forms.hpp"

using namespace chi3;

TEST_CASE("character sums for small n") {
    SECTION("n = 3") {
        FieldCtx ctx = build_field(3, 3);
        CharSumReport rep = gamma_sums(ctx);
        CHECK(rep.gamma1 == -2);
        CHECK(rep.gamma2 == -24);
        CHECK(rep.quartic_sum == -1);
        CHECK(rep.quartic_pair_sum == -1);
        CHECK(rep.weil_bound == 30);  // 6 * floor(sqrt(27))
    }
    SECTION("n = 5") {
        FieldCtx ctx = build_field(3, 5);
        CharSumReport rep = gamma_sums(ctx);
        CHECK(rep.gamma1 == -22);
        CHECK(rep.gamma2 == 40);
        CHECK(rep.quartic_sum == -1);
        CHECK(rep.quartic_pair_sum == -1);
        CHECK(std::abs(rep.gamma1) <= rep.weil_bound);
        CHECK(std::abs(rep.gamma2) <= rep.weil_bound);
    }
    SECTION("domain guards") {
        FieldCtx even = build_field(3, 2);
        CHECK_THROWS_AS(gamma_sums(even), domain_error);
        FieldCtx p5 = build_field(5, 1);
        CHECK_THROWS_AS(gamma_sums(p5), domain_error);
    }
}

TEST_CASE("boomerang counts from the two character sums") {
    SECTION("frozen pairs") {
        NuPair a = nu_from_gamma(3, -2, -24);
        CHECK(a.nu0 == 26);
        CHECK(a.nu1 == 0);
        NuPair b = nu_from_gamma(5, -22, 40);
        CHECK(b.nu0 == 182);
        CHECK(b.nu1 == 60);
        NuPair c = nu_from_gamma(7, 250, 112);
        CHECK(c.nu0 == 1486);
        CHECK(c.nu1 == 700);
        NuPair d = nu_from_gamma(9, 142, 48);
        CHECK(d.nu0 == 14678);
        CHECK(d.nu1 == 5004);
    }
    SECTION("the pair always partitions the nonzero b") {
        for (int n : {3, 5, 7, 9}) {
            CAPTURE(n);
            FieldCtx ctx = build_field(3, n);
            CharSumReport rep = gamma_sums(ctx);
            NuPair nu = nu_from_gamma(n, rep.gamma1, rep.gamma2);
            CHECK(nu.nu0 + nu.nu1 == ctx.q - 1);
        }
    }
    SECTION("inconsistent sums are rejected") {
        CHECK_THROWS_AS(nu_from_gamma(3, 0, 1), invariant_error);
    }
    SECTION("closed form matches the measured boomerang spectrum") {
        for (int n : {3, 5}) {
            CAPTURE(n);
            FieldCtx ctx = build_field(3, n);
            CharSumReport rep = gamma_sums(ctx);
            NuPair nu = nu_from_gamma(n, rep.gamma1, rep.gamma2);
            BoomSpectrum s =
                boom_spectrum(ctx, tabulate(ctx, FuncKind::binomial, i64(ctx.q) - 3), false);
            u64 got0 = s.nu.count(0) ? s.nu.at(0) : 0;
            u64 got1 = s.nu.count(1) ? s.nu.at(1) : 0;
            CHECK(got0 == nu.nu0);
            CHECK(got1 == nu.nu1);
            CHECK(got0 + got1 == ctx.q - 1);  // no entry ever exceeds 1
        }
    }
}

TEST_CASE("predicted DDT of the APN power maps") {
    struct Row { int n, m; };
    for (Row row : {Row{3, 1}, Row{5, 1}, Row{5, 2}}) {
        CAPTURE(row.n, row.m);
        FieldCtx ctx = build_field(3, row.n);
        u64 r_even = apn_unique_even(row.n, row.m);
        FuncTable f = tabulate(ctx, FuncKind::power, i64(r_even));
        DiffRow dr = delta_row(ctx, f, 1);
        for (u64 b = 0; b < ctx.q; ++b)
            REQUIRE(dr.counts[b] == apn_ddt_prediction(ctx, row.m, elem(b)));
    }
}

TEST_CASE("closed differential spectra") {
    CHECK(locally_pn_spectrum(27).delta == 7);
    CHECK(locally_pn_spectrum(243).omega.at(0) == 60);
    CHECK_THROWS_AS(locally_pn_spectrum(25), domain_error);
    CHECK(apn_spectrum_closed(3).omega.at(1) == 3);
    CHECK_THROWS_AS(apn_spectrum_closed(4), domain_error);
}

// Exhaustive comparison of the per-b character conditions with the measured
// solution cells at n = 3 and 5. The off-diagonal and boomerang-tuple
// conditions are exact; the mid-exponent D00 condition is necessary only, and
// the values it overshoots on are exactly the (q-3)/4 values with no solution.
TEST_CASE("per-b closed-form conditions against measured cells") {
    for (int n : {3, 5}) {
        DYNAMIC_SECTION("n = " << n) {
            FieldCtx ctx = build_field(3, n);

            SECTION("side-class conditions are exact") {
                for (int m = 1; 2 * m <= n - 1; ++m) {
                    if (std::gcd(m, n) != 1) continue;
                    auto all = dij_all(ctx, i64(apn_exponent(n, m).r_even));
                    for (u64 b = 1; b < ctx.q; ++b) {
                        CAPTURE(m, b);
                        SidePrediction sp = side_class_prediction(ctx, m, elem(b));
                        CHECK(all[b].d[0][1] == sp.d01);
                        CHECK(all[b].d[1][0] == sp.d10);
                    }
                }
            }

            SECTION("mid-exponent conditions: off-diagonal exact, D00 necessary") {
                const i64 r = i64(2 * detail::pow3(unsigned((n - 1) / 2)) + 1);
                auto all = dij_all(ctx, r);
                u64 phantoms = 0;
                for (u64 b = 1; b < ctx.q; ++b) {
                    CAPTURE(b);
                    MidPrediction mp = mid_exponent_prediction(ctx, elem(b));
                    CHECK(all[b].d[0][1] == mp.d01);
                    CHECK(all[b].d[1][0] == mp.d10);
                    CHECK(all[b].d[1][1] == 0);
                    if (all[b].d[0][0] == 1) CHECK(mp.d00 == 1);  // necessity
                    if (mp.d00 != all[b].d[0][0]) {
                        // the only allowed overshoot: condition fires, no solution
                        CHECK(mp.d00 == 1);
                        CHECK(all[b].total() == 0);
                        ++phantoms;
                    } else {
                        CHECK(all[b].total() > 0);
                    }
                }
                CHECK(phantoms == (ctx.q - 3) / 4);
            }

            SECTION("boomerang-tuple conditions are exact") {
                BijklBatch batch = bijkl_all(ctx, i64(ctx.q) - 3);
                for (u64 b = 1; b < ctx.q; ++b) {
                    CAPTURE(b);
                    BoomTuplePrediction tp = boom_tuple_prediction(ctx, elem(b));
                    const auto& t = batch.tuples[b];
                    CHECK(t[0b0001] == tp.b0001);
                    CHECK(t[0b0010] == tp.b0010);
                    CHECK(t[0b0100] == tp.b0100);
                    CHECK(t[0b1000] == tp.b1000);
                }
            }
        }
    }
}

TEST_CASE("quadratic character sums against the discriminant form") {
    for (int n : {3, 5}) {
        CAPTURE(n);
        FieldCtx ctx = build_field(3, n);
        std::mt19937 rng(u64(n) * 1409);
        std::uniform_int_distribution<u64> nz(1, ctx.q - 1);
        std::uniform_int_distribution<u64> any(0, ctx.q - 1);
        for (int i = 0; i < 100; ++i) {
            elem a2 = elem(nz(rng)), a1 = elem(any(rng)), a0 = elem(any(rng));
            CAPTURE(a2, a1, a0);
            CHECK_NOTHROW(quad_charsum_check(ctx, a2, a1, a0));
        }
        // vanishing discriminant: a1^2 = 4 a0 a2 with a2 = a0 = a1 = 1 (4 = 1 in F_3)
        CHECK(quad_charsum_check(ctx, 1, 1, 1) == i64(ctx.q - 1));
        CHECK_THROWS_AS(quad_charsum_check(ctx, 0, 1, 1), domain_error);
    }
    SECTION("q = 1 mod 4 field") {
        FieldCtx ctx = build_field(5, 2);
        std::mt19937 rng(99);
        std::uniform_int_distribution<u64> nz(1, ctx.q - 1);
        for (int i = 0; i < 50; ++i)
            CHECK_NOTHROW(quad_charsum_check(ctx, elem(nz(rng)), elem(nz(rng) % 25), 3));
    }
}

TEST_CASE("integer square root helper") {
    CHECK(detail::isqrt(0) == 0);
    CHECK(detail::isqrt(26) == 5);
    CHECK(detail::isqrt(27) == 5);
    CHECK(detail::isqrt(1594323) == 1262);  // 3^13
    for (u64 v : {1ull, 4ull, 97ull, 10000ull, 123456789ull}) {
        u64 s = detail::isqrt(v);
        CHECK(s * s <= v);
        CHECK((s + 1) * (s + 1) > v);
    }
}
