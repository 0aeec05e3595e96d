#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace iwalab;

namespace {
PowerSeries S(const Precision& prec, const char* text) { return parse_series(text, prec); }
}  // namespace

TEST(Precision, Validation) {
    EXPECT_NO_THROW(Precision(3, 1, 1));
    EXPECT_THROW(Precision(2, 4, 8), error);
    EXPECT_THROW(Precision(9, 4, 8), error);
    EXPECT_THROW(Precision(3, 0, 8), error);
    EXPECT_THROW(Precision(3, 4, 0), error);
}

TEST(SeriesMul, Examples) {
    const Precision prec(3, 4, 8);
    EXPECT_EQ(series_mul(S(prec, "T"), S(prec, "T")), S(prec, "T^2"));
    const PowerSeries geo = S(prec, "1 - T + T^2 - T^3 + T^4 - T^5 + T^6 - T^7");
    EXPECT_EQ(series_mul(S(prec, "1+T"), geo), PowerSeries::constant(prec, 1));
    const PowerSeries prod = series_mul(S(prec, "1+T+T^2"), S(prec, "T+3"));
    EXPECT_EQ(prod, S(prec, "T^3 + 4*T^2 + 4*T + 3"));
    const auto naive = oracle::naive_mul({1, 1, 1}, {3, 1}, 81, 8);
    EXPECT_EQ(std::vector<u64>(prod.coeffs().begin(), prod.coeffs().end()), naive);
}

TEST(SeriesMul, PrecisionMismatch) {
    try {
        (void)series_mul(PowerSeries(Precision(3, 4, 8)), PowerSeries(Precision(3, 4, 9)));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::precision_mismatch);
    }
}

TEST(SeriesMul, MatchesNaiveProduct) {
    std::mt19937_64 rng(1);
    const Precision prec(5, 3, 12);
    for (int i = 0; i < 50; ++i) {
        const PowerSeries a = oracle::random_series(rng, prec), b = oracle::random_series(rng, prec);
        const auto want = oracle::naive_mul({a.coeffs().begin(), a.coeffs().end()},
                                            {b.coeffs().begin(), b.coeffs().end()}, 125, 12);
        const PowerSeries got = a * b;
        EXPECT_EQ(std::vector<u64>(got.coeffs().begin(), got.coeffs().end()), want);
    }
}

TEST(InvertUnit, Examples) {
    const Precision p38(3, 4, 8);
    EXPECT_EQ(invert_unit(UnitSeries(PowerSeries::constant(p38, 1))).series(), PowerSeries::constant(p38, 1));
    EXPECT_EQ(invert_unit(UnitSeries(S(p38, "1+T"))).series(),
              S(p38, "1 - T + T^2 - T^3 + T^4 - T^5 + T^6 - T^7"));
    const Precision p32(3, 2, 4);
    EXPECT_EQ(invert_unit(UnitSeries(PowerSeries::constant(p32, 2))).series(), PowerSeries::constant(p32, 5));
}

TEST(InvertUnit, RejectsNonUnits) {
    const Precision prec(3, 2, 4);
    try {
        (void)UnitSeries(S(prec, "3 + T"));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_a_unit);
    }
}

TEST(InvertUnit, RandomUnitsInvert) {
    std::mt19937_64 rng(2);
    const Precision prec(3, 5, 16);
    for (int i = 0; i < 40; ++i) {
        PowerSeries s = oracle::random_preparable(rng, prec, 0);
        const UnitSeries u(s);
        EXPECT_EQ(s * invert_unit(u).series(), PowerSeries::constant(prec, 1));
    }
}

TEST(Weierstrass, Examples) {
    const Precision prec(3, 4, 8);
    auto t = weierstrass_prepare(S(prec, "T"));
    EXPECT_EQ(t.unit.series(), PowerSeries::constant(prec, 1));
    EXPECT_EQ(t.poly, DistinguishedPoly::from_integers(prec, {0, 1}));
    auto t3 = weierstrass_prepare(S(prec, "T+3"));
    EXPECT_EQ(t3.poly, DistinguishedPoly::from_integers(prec, {3, 1}));

    const PowerSeries f = S(prec, "T^3 + 4*T^2 + 4*T + 3");
    auto prep = weierstrass_prepare(f);
    EXPECT_EQ(prep.poly.degree(), 1);
    EXPECT_EQ(series_mul(prep.unit.series(), prep.poly.to_series()), f);
}

TEST(Weierstrass, Degree) {
    const Precision prec(3, 4, 16);
    EXPECT_EQ(weierstrass_degree(S(prec, "T^2+3")), 2);
    EXPECT_EQ(weierstrass_degree(S(prec, "2 + 3*T + T^5")), 0);
    EXPECT_EQ(weierstrass_degree(S(prec, "(1+T)^3 - 1")), 3);
}

TEST(Weierstrass, Errors) {
    const Precision prec(3, 4, 8);
    try {
        (void)weierstrass_prepare(S(prec, "3 + 9*T + 6*T^7"));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::no_preparation);
    }
}

TEST(Weierstrass, SoundnessAndUniquenessOnRandomSeries) {
    std::mt19937_64 rng(4);
    for (u64 p : {3u, 5u}) {
        const Precision prec(p, 4, 24);
        for (int i = 0; i < 40; ++i) {
            const int d = i % 6;
            const PowerSeries f = oracle::random_preparable(rng, prec, d);
            const Preparation a = weierstrass_prepare(f);
            EXPECT_EQ(a.poly.degree(), d);
            EXPECT_EQ(series_mul(a.unit.series(), a.poly.to_series()), f);
            // prepare a unit multiple of f: the distinguished part must not move
            const PowerSeries v = oracle::random_preparable(rng, prec, 0);
            EXPECT_EQ(weierstrass_prepare(v * f).poly, a.poly);
        }
    }
}

TEST(Iota, Examples) {
    const Precision prec(3, 3, 8);
    EXPECT_EQ(iota(PowerSeries::constant(prec, 7)), PowerSeries::constant(prec, 7));
    EXPECT_EQ(iota(S(prec, "T")), S(prec, "-T + T^2 - T^3 + T^4 - T^5 + T^6 - T^7"));
}

TEST(Iota, RingAutomorphismAndInvolution) {
    std::mt19937_64 rng(6);
    const Precision prec(5, 3, 14);
    for (int i = 0; i < 40; ++i) {
        const PowerSeries f = oracle::random_series(rng, prec), g = oracle::random_series(rng, prec);
        const PowerSeries jf = iota(f);
        EXPECT_EQ(std::vector<u64>(jf.coeffs().begin(), jf.coeffs().end()), oracle::iota_by_powers(f));
        EXPECT_EQ(iota(jf), f);
        EXPECT_EQ(iota(f * g), jf * iota(g));
        EXPECT_EQ(iota(f + g), jf + iota(g));
    }
}

TEST(Iota, PreservesWeierstrassDegree) {
    std::mt19937_64 rng(8);
    const Precision prec(3, 3, 16);
    for (int i = 0; i < 30; ++i) {
        const PowerSeries f = oracle::random_preparable(rng, prec, i % 5);
        EXPECT_EQ(weierstrass_degree(iota(f)), weierstrass_degree(f));
    }
}

TEST(Iota, DistinguishedRouteMatchesSeriesRoute) {
    const Precision prec(3, 2, 12);
    EXPECT_EQ(iota_distinguished(parse_distinguished("T+3", prec)), parse_distinguished("T+6", prec));
    EXPECT_EQ(iota_distinguished(parse_distinguished("T", prec)), parse_distinguished("T", prec));
    const Precision p5(5, 2, 12);
    EXPECT_EQ(iota_distinguished(parse_distinguished("T+5", p5)), parse_distinguished("T+20", p5));

    std::mt19937_64 rng(9);
    const Precision big(3, 4, 24);
    for (int i = 0; i < 30; ++i) {
        const DistinguishedPoly f = oracle::random_distinguished(rng, big, 1 + i % 3);
        EXPECT_EQ(iota_distinguished(f), weierstrass_prepare(iota(f.to_series())).poly) << to_string(f);
        EXPECT_EQ(iota_distinguished(iota_distinguished(f)), f);
    }
}

TEST(Omega, Examples) {
    const Precision prec(3, 4, 16);
    EXPECT_EQ(omega(prec, 0), parse_distinguished("T", prec));
    EXPECT_EQ(omega(prec, 1), parse_distinguished("T^3 + 3*T^2 + 3*T", prec));
    const DistinguishedPoly w2 = omega(prec, 2);
    EXPECT_EQ(w2.degree(), 9);
    try {
        (void)omega(prec, 3);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::insufficient_truncation);
    }
}

TEST(Omega, SuccessiveLevelsDivide) {
    const Precision prec(3, 4, 30);
    const Modulus& R = prec.ring();
    for (int n = 0; n < 2; ++n) {
        auto [q, r] = poly::divmod_monic(omega(prec, n + 1).coeffs(), omega(prec, n).coeffs(), R);
        poly::trim(r);
        EXPECT_TRUE(r.empty()) << "n=" << n;
    }
}

TEST(Expr, ParsesAndFormats) {
    const Precision prec(3, 4, 8);
    EXPECT_EQ(to_string(S(prec, "(T+3)(1+T+T^2)")), "T^3 + 4*T^2 + 4*T + 3");
    EXPECT_EQ(to_string(S(prec, "-1")), "80");
    EXPECT_EQ(to_string(S(prec, "2T - 2*T")), "0");
    EXPECT_THROW(S(prec, "T + "), error);
    EXPECT_THROW(S(prec, "X"), error);
    EXPECT_THROW(S(prec, "T^99999"), error);
    EXPECT_THROW(parse_distinguished("T+1", prec), error);
}
