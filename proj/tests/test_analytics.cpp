#include "pqclone/analytics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pqclone;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Strategy, ParsesAndRenders)
{
    const Strategy s = Strategy::parse(" 1X(2 -> 3) , 2x(1->3)");
    EXPECT_EQ(s.to_string(), "2x(1->3),1x(2->3)");
    EXPECT_EQ(s.input_copies(), 4);
    EXPECT_EQ(s.max_output(), 9);
    EXPECT_EQ(s.largest_target(), 3);
}

TEST(Strategy, MergesDuplicateShares)
{
    EXPECT_EQ(Strategy::parse("1x(1->2),2x(1->2)").to_string(), "3x(1->2)");
}

TEST(Strategy, ReportsParseErrorPosition)
{
    try {
        Strategy::parse("2x(1-3)");
        FAIL() << "no throw";
    } catch (const StrategyParseError& e) {
        EXPECT_EQ(e.position(), 4U);
    }
    EXPECT_THROW(Strategy::parse(""), StrategyParseError);
    EXPECT_THROW(Strategy::parse("2x(1->3) extra"), StrategyParseError);
    EXPECT_THROW(Strategy::parse("2x(3->1)"), StrategyError);
    EXPECT_THROW(Strategy::parse("0x(1->2)"), StrategyError);
}

TEST(Strategy, DeclaredCopiesMustMatch)
{
    const Strategy s = Strategy::parse("1x(1->2),1x(2->3)");
    EXPECT_THROW(s.require_input_copies(2), StrategyError);
    EXPECT_NO_THROW(s.require_input_copies(3));
}

TEST(Strategy, RoundTripProperty)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> small(1, 6);
    for (int i = 0; i < 200; ++i) {
        std::vector<CloneShare> shares;
        for (int p = small(rng) % 4; p >= 0; --p) {
            const int k = small(rng);
            shares.push_back({k, k + small(rng) - 1, small(rng)});
        }
        const Strategy s(shares);
        EXPECT_EQ(Strategy::parse(s.to_string()), s);
    }
}

TEST(ChainAngle, KnownValues)
{
    EXPECT_NEAR(chain_angle(kPi / 6, 2), std::acos(0.25) / 2, 1e-14);
    EXPECT_DOUBLE_EQ(chain_angle(0.3, 1), 0.3);
    EXPECT_NEAR(chain_angle(kPi / 4, 5), kPi / 4, 1e-14);
    EXPECT_THROW(chain_angle(0.3, 0), std::domain_error);
    EXPECT_THROW(chain_angle(1.0, 2), std::domain_error);
}

TEST(ChainAngle, CosineLawProperty)
{
    for (double theta = 0.01; theta < kPi / 4; theta += 0.05) {
        for (int j = 1; j <= 12; ++j) {
            EXPECT_NEAR(std::cos(2 * chain_angle(theta, j)), std::pow(std::cos(2 * theta), j), 1e-12);
        }
    }
}

TEST(Gamma, KnownValuesAndLimits)
{
    EXPECT_NEAR(success_gamma(1, 2, kPi / 6), 2.0 / 3.0, 1e-12);
    for (int n = 2; n < 10; ++n) {
        for (int m = 1; m < n; ++m) {
            EXPECT_NEAR(success_gamma(m, n, kPi / 4), 1.0, 1e-12);
            EXPECT_NEAR(success_gamma(m, n, 1e-4), static_cast<double>(m) / n, 1e-6);
            EXPECT_NEAR(success_gamma(m, n, 0.0), static_cast<double>(m) / n, 1e-15);
        }
    }
}

TEST(Gamma, MonotoneInThetaAndBounded)
{
    for (int n = 2; n < 8; ++n) {
        for (int m = 1; m < n; ++m) {
            double last = 0.0;
            for (double theta = 0.0; theta <= kPi / 4; theta += 0.01) {
                const double g = success_gamma(m, n, theta);
                EXPECT_GE(g, last - 1e-12);
                EXPECT_LE(g, 1.0);
                last = g;
            }
        }
    }
}

TEST(Spectrum, TwoSinglesAtPiOverSix)
{
    const ProbabilitySpectrum p = spectrum(Strategy::parse("2x(1->2)"), kPi / 6);
    EXPECT_NEAR(p.at(0), 1.0 / 9.0, 1e-12);
    EXPECT_NEAR(p.at(2), 4.0 / 9.0, 1e-12);
    EXPECT_NEAR(p.at(4), 4.0 / 9.0, 1e-12);
    EXPECT_EQ(p.at(1), 0.0);
}

TEST(Spectrum, CertainAtQuarterPi)
{
    const ProbabilitySpectrum p = spectrum(Strategy::parse("1x(2->3)"), kPi / 4);
    ASSERT_EQ(p.pmf().size(), 1U);
    EXPECT_NEAR(p.at(3), 1.0, 1e-12);
}

TEST(Spectrum, ConvolutionMatchesEnumeration)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<CloneShare> shares;
        int budget = 12;
        for (int p = 0; p < 3 && budget > 0; ++p) {
            const int k = std::uniform_int_distribution<int>(1, std::min(budget, 3))(rng);
            const int c = std::uniform_int_distribution<int>(1, budget / k)(rng);
            shares.push_back({k, k + std::uniform_int_distribution<int>(0, 5)(rng), c});
            budget -= k * c;
        }
        const Strategy s(shares);
        const double theta = std::uniform_real_distribution<double>(0.0, kPi / 4)(rng);
        const ProbabilitySpectrum a = spectrum(s, theta);
        const ProbabilitySpectrum b = spectrum_enumerated(s, theta);
        EXPECT_NEAR(a.total(), 1.0, 1e-12);
        EXPECT_NEAR(b.total(), 1.0, 1e-12);
        for (int x = 0; x <= s.max_output(); ++x) {
            EXPECT_NEAR(a.at(x), b.at(x), 1e-12);
        }
    }
}

TEST(Compare, MEqualsTwoNEqualsThreeOracle)
{
    const StrategyComparison c = compare_strategies(2, 3, kPi / 6);
    EXPECT_NEAR(c.e1, 18.0 / 7.0, 1e-12);
    EXPECT_NEAR(c.e2, 24.0 / 7.0, 1e-12);
    EXPECT_NEAR(c.f1, 1.0 / 7.0, 1e-12);
    EXPECT_NEAR(c.f2, 9.0 / 49.0, 1e-12);
}

TEST(Compare, ClosedFormsMatchSpectra)
{
    for (double theta : {0.05, 0.3, 0.6}) {
        const StrategyComparison c = compare_strategies(3, 5, theta);
        const ProbabilitySpectrum whole = spectrum(Strategy::parse("1x(3->5)"), theta);
        const ProbabilitySpectrum split = spectrum(Strategy::parse("3x(1->5)"), theta);
        EXPECT_NEAR(c.e1, expected_copies(whole), 1e-12);
        EXPECT_NEAR(c.e2, expected_copies(split), 1e-12);
        EXPECT_NEAR(c.f1, failure_probability(whole, 5), 1e-12);
        EXPECT_NEAR(c.f2, failure_probability(split, 5), 1e-12);
    }
}

TEST(Compare, SplittingNeverLosesProperty)
{
    for (int n = 2; n <= 20; ++n) {
        for (int m = 1; m < n; ++m) {
            for (int i = 0; i < 200; ++i) {
                const double theta = 0.001 + (kPi / 4 - 0.001) * i / 199.0;
                const StrategyComparison c = compare_strategies(m, n, theta);
                EXPECT_GE(c.e2 - c.e1, -1e-12);
                EXPECT_GE(c.f2 - c.f1, -1e-12);
            }
            const StrategyComparison top = compare_strategies(m, n, kPi / 4);
            EXPECT_NEAR(top.f1, 0.0, 1e-12);
            EXPECT_NEAR(top.f2, 0.0, 1e-12);
        }
    }
}

TEST(Compare, RejectsBadCounts)
{
    EXPECT_THROW(compare_strategies(3, 3, 0.2), std::domain_error);
    EXPECT_THROW(compare_strategies(0, 3, 0.2), std::domain_error);
}
