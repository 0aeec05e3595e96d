#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace iwalab;

TEST(Modulus, ArithmeticStaysCanonical) {
    const Modulus R(3, 4);
    EXPECT_EQ(R.value(), 81u);
    EXPECT_EQ(R.reduce(-1), 80u);
    EXPECT_EQ(R.add(80, 5), 4u);
    EXPECT_EQ(R.sub(2, 5), 78u);
    EXPECT_EQ(R.neg(0), 0u);
    EXPECT_EQ(R.mul(40, 40), 1600u % 81u);
    EXPECT_EQ(R.pow(2, 10), 1024u % 81u);
}

TEST(Modulus, InverseAndValuation) {
    const Modulus R(3, 2);
    EXPECT_EQ(R.inverse(2), 5u);  // 2 * 5 = 10 = 1 mod 9
    for (u64 a = 0; a < 9; ++a) {
        if (!R.is_unit(a)) {
            EXPECT_THROW(R.inverse(a), error);
            continue;
        }
        EXPECT_EQ(R.mul(a, R.inverse(a)), 1u);
    }
    EXPECT_EQ(R.valuation(0), 2);
    EXPECT_EQ(R.valuation(3), 1);
    EXPECT_EQ(R.valuation(6), 1);
    EXPECT_EQ(R.valuation(4), 0);
}

TEST(Modulus, LargeModulusUsesWideProducts) {
    const Modulus R(5, 26);  // 5^26 is just under 2^61
    const u64 a = R.value() - 2, b = R.value() - 3;
    EXPECT_EQ(R.mul(a, b), 6u);
    EXPECT_EQ(R.mul(R.inverse(a), a), 1u);
    EXPECT_THROW(Modulus(5, 28), error);
}

TEST(Modulus, RejectsNonPrimeBase) {
    EXPECT_THROW(Modulus(9, 1), error);
    EXPECT_THROW(Modulus(3, 0), error);
}

TEST(PrimitiveRoot, SmallPrimes) {
    EXPECT_EQ(primitive_root(3), 2u);
    EXPECT_EQ(primitive_root(5), 2u);
    EXPECT_EQ(primitive_root(7), 3u);
    EXPECT_EQ(primitive_root(23), 5u);
}

TEST(Smith, DiagonalOfKnownMatrix) {
    const Modulus R(3, 3);
    // diag(1, 3, 9) disguised by unimodular row and column operations
    ModMatrix a = ModMatrix::from_rows({{1, 3, 9}, {2, 9, 18}, {0, 3, 18}}, 3);
    auto snf = smith_form(a, R, true);
    std::vector<int> v = snf.valuations;
    std::sort(v.begin(), v.end());
    EXPECT_EQ(v, (std::vector<int>{0, 1, 2}));
    // U A V is diagonal with the reported valuations
    ModMatrix d = multiply(multiply(snf.left, a, R), snf.right, R);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i != j) {
                EXPECT_EQ(d(i, j), 0u);
            }
        }
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(R.valuation(d(i, i)), snf.valuations[i]);
}

TEST(Smith, CokernelMatchesEnumeration) {
    std::mt19937_64 rng(7);
    for (u64 p : {3u, 5u}) {
        const Modulus R(p, p == 3 ? 2 : 1);
        std::uniform_int_distribution<u64> dist(0, R.value() - 1);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t rows = 1 + trial % 3, cols = 1 + (trial / 3) % 3;
            ModMatrix a(rows, cols);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) a(i, j) = dist(rng) * ((trial % 2) ? p : 1) % R.value();
            EXPECT_EQ(cokernel_exponent(a, R), oracle::cokernel_exponent_brute(a, R)) << "trial " << trial;
        }
    }
}

TEST(Smith, KernelGeneratorsSpanTheKernel) {
    std::mt19937_64 rng(11);
    const Modulus R(3, 2);
    std::uniform_int_distribution<u64> dist(0, 8);
    for (int trial = 0; trial < 40; ++trial) {
        ModMatrix a(2, 3);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) a(i, j) = dist(rng) * (trial % 3 == 0 ? 3 : 1) % 9;
        std::set<oracle::Vec> kernel;
        for (const auto& x : oracle::all_vectors(9, 3)) {
            auto y = apply(a, x, R);
            if (std::all_of(y.begin(), y.end(), [](u64 v) { return v == 0; })) kernel.insert(x);
        }
        EXPECT_EQ(oracle::span(kernel_generators(a, R), R, 3), kernel) << "trial " << trial;
    }
}

TEST(Determinant, MatchesCofactorExpansion) {
    std::mt19937_64 rng(3);
    const Modulus R(5, 2);
    std::uniform_int_distribution<u64> dist(0, 24);
    for (int trial = 0; trial < 50; ++trial) {
        ModMatrix a(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) a(i, j) = dist(rng) * (trial % 4 == 0 ? 5 : 1) % 25;
        auto m = [&](int i, int j) { return static_cast<long long>(a(i, j)); };
        long long det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                        m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                        m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        EXPECT_EQ(determinant(a, R), R.reduce(det)) << "trial " << trial;
    }
}

TEST(Howell, CanonicalForEqualSubgroups) {
    std::mt19937_64 rng(5);
    const Modulus R(3, 2);
    std::uniform_int_distribution<u64> dist(0, 8);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<oracle::Vec> gens(1 + trial % 3, oracle::Vec(3));
        for (auto& g : gens)
            for (auto& x : g) x = dist(rng) * (trial % 2 ? 3 : 1) % 9;
        const auto basis = howell_form(gens, 3, R);
        const auto group = oracle::span(gens, R, 3);
        EXPECT_EQ(oracle::span(basis, R, 3), group);
        EXPECT_EQ(howell_order_exponent(basis, R), oracle::log_p(group.size(), 3));
        // a different generating set of the same group: shuffled, doubled, with a redundant sum
        std::vector<oracle::Vec> other = gens;
        std::reverse(other.begin(), other.end());
        for (auto& g : other)
            for (auto& x : g) x = R.mul(x, 2);
        if (other.size() >= 2) {
            oracle::Vec s(3);
            for (std::size_t j = 0; j < 3; ++j) s[j] = R.add(other[0][j], other[1][j]);
            other.push_back(s);
        }
        EXPECT_EQ(howell_form(other, 3, R), basis) << "trial " << trial;
    }
}
