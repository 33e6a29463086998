#include <chemolv/hypotheses.hpp>
#include <chemolv/steady_states.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chemolv;

namespace {

ModelParams h1_example() {
    auto p = fixtures::plain();
    p.a1 = p.b2 = 3.0;
    p.chi1 = p.chi2 = 1.0;
    return p;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

// ---------------------------------------------------------------- H1 .. H3

TEST(H1, CompetitiveExampleHoldsWithUnitMargins) {
    const auto r = check_h1(h1_example());
    EXPECT_TRUE(r.holds);
    ASSERT_EQ(r.margins.size(), 2u);
    EXPECT_DOUBLE_EQ(r.margins[0].slack, 1.0);
    EXPECT_DOUBLE_EQ(r.margins[1].slack, 1.0);
}

TEST(H1, BoundaryFailsStrictInequality) {
    auto p = h1_example();
    p.a1 = 2.0;
    const auto r = check_h1(p);
    EXPECT_FALSE(r.holds);
    EXPECT_DOUBLE_EQ(r.margins[0].slack, 0.0);
}

TEST(H1, NoChemotaxisNoNegativeCouplings) {
    auto p = fixtures::plain();
    p.a2 = 0.3;
    p.b3 = 0.2;
    EXPECT_TRUE(check_h1(p).holds);
}

TEST(H2H3, NonnegativeInteractionsGiveSelfLimitationMargins) {
    auto p = fixtures::weak_competition(0.4);
    p.a3 = 0.2;
    p.b4 = 0.7;
    for (const auto& r : {check_h2(p), check_h3(p)}) {
        EXPECT_TRUE(r.holds);
        EXPECT_DOUBLE_EQ(r.margins[0].slack, p.a1);
        EXPECT_DOUBLE_EQ(r.margins[1].slack, p.b2);
    }
}

TEST(H2, NegativeNonlocalSelfTermFails) {
    auto p = fixtures::plain();
    p.a3 = -1.0;
    p.a1 = 0.5;
    p.b2 = 10.0;
    const auto r = check_h2(p);
    EXPECT_FALSE(r.holds);
    EXPECT_DOUBLE_EQ(r.margins[0].slack, -0.5);
}

TEST(H3, StrongCooperationFails) {
    auto p = fixtures::plain();
    p.a2 = p.b1 = -2.0;
    p.a1 = p.b2 = 1.9;
    const auto r = check_h3(p);
    EXPECT_FALSE(r.holds);
    EXPECT_NEAR(r.margins[0].slack, -0.1, 1e-15);
    EXPECT_NEAR(r.margins[1].slack, -0.1, 1e-15);
}

// ---------------------------------------------------------------- H4 .. H6

TEST(H4, LowDimensionsHoldTrivially) {
    auto p = fixtures::weak_competition(5.0);
    for (int n : {1, 2}) EXPECT_TRUE(check_h4(p, n).holds) << n;
}

TEST(H4, ThreeDimensionsBindsOnA1) {
    auto p = fixtures::weak_competition(0.0);
    p.chi1 = 1.0;
    p.a1 = 0.3;
    const auto r = check_h4(p, 3);
    EXPECT_FALSE(r.holds);
    EXPECT_NEAR(r.margins[0].slack, 0.3 - 1.0 / 3.0, 1e-15);
    EXPECT_FALSE(r.margins[0].satisfied());
}

TEST(H4, ZeroA2FailsInAnyDimension) {
    auto p = fixtures::weak_competition(0.2);
    p.a2 = 0.0;
    for (int n = 1; n <= 5; ++n) EXPECT_FALSE(check_h4(p, n).holds) << n;
}

TEST(H5, CompetitiveExample) {
    const auto r = check_h5(h1_example());
    EXPECT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.margins[0].slack, 1.0);
    EXPECT_DOUBLE_EQ(r.margins[1].slack, 1.0);
}

TEST(H6, TwoDimensionsReducesToFandGAtOne) {
    auto p = h1_example();
    p.a2 = -0.4;
    p.b1 = -0.6;
    const auto r = check_h6(p, 2);
    EXPECT_DOUBLE_EQ(r.margins[0].slack, p.a1 - 0.5 * (0.4 + 0.6));
    EXPECT_DOUBLE_EQ(r.margins[1].slack, p.b2 - 0.5 * (0.6 + 0.4));
}

TEST(H6, NoChemotaxisNoCooperation) {
    auto p = fixtures::plain();
    p.a1 = 0.7;
    p.b2 = 0.9;
    for (int n = 1; n <= 4; ++n) {
        const auto r = check_h6(p, n);
        EXPECT_TRUE(r.holds);
        EXPECT_NEAR(r.margins[0].slack, 0.7, 1e-15);
        EXPECT_NEAR(r.margins[1].slack, 0.9, 1e-15);
    }
}

TEST(H6, MatchesExpandedDimensionForm) {
    // Expanded inequalities written out in n. The v-line uses chi2*k in the
    // (n+2) term, which is what g(n/2) expands to.
    oracle::ParamSampler sample(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = sample();
        for (int n = 1; n <= 6; ++n) {
            const double N = n, d = p.d3;
            const double a2m = negative_part(p.a2), b1m = negative_part(p.b1);
            const double u_rhs = N * a2m / (N + 2) + 2 * b1m / (N + 2) + p.chi1 * p.k * (N - 2) / (d * N) +
                                 p.chi1 * p.l * (N - 2) / (d * (N + 2)) + 2 * p.chi2 * p.k * (N - 2) / (d * N * (N + 2));
            const double v_rhs = N * b1m / (N + 2) + 2 * a2m / (N + 2) + p.chi2 * p.l * (N - 2) / (d * N) +
                                 p.chi2 * p.k * (N - 2) / (d * (N + 2)) + 2 * p.chi1 * p.l * (N - 2) / (d * N * (N + 2));
            const auto r = check_h6(p, n);
            EXPECT_LE(rel_diff(r.margins[0].slack, p.a1 - u_rhs), 1e-12);
            EXPECT_LE(rel_diff(r.margins[1].slack, p.b2 - v_rhs), 1e-12);
            EXPECT_EQ(r.holds, std::min(eval_f(p, 0.5 * n), eval_g(p, 0.5 * n)) > 0.0);
        }
    }
}

// ---------------------------------------------------------------- f, g, gamma*

TEST(FG, ValueAtOne) {
    auto p = h1_example();
    p.a2 = -0.8;
    p.b1 = -0.2;
    EXPECT_DOUBLE_EQ(eval_f(p, 1.0), p.a1 - 0.5 * (0.8 + 0.2));
    EXPECT_DOUBLE_EQ(eval_g(p, 1.0), p.b2 - 0.5 * (0.2 + 0.8));
}

TEST(FG, ConstantWithoutChemotaxisOrCooperation) {
    auto p = fixtures::weak_competition();
    for (double g : {0.5, 1.0, 2.0, 7.0, -3.0}) {
        EXPECT_DOUBLE_EQ(eval_f(p, g), p.a1);
        EXPECT_DOUBLE_EQ(eval_g(p, g), p.b2);
    }
}

TEST(FG, HandArithmeticAtTwo) {
    auto p = fixtures::plain();
    p.a1 = 5.0;
    p.a2 = p.b1 = -1.0;
    p.chi1 = p.chi2 = 1.0;
    // 5 - 2/3 - 1/3 - 1/2 - 1/3 - 1/6 = 3
    EXPECT_NEAR(eval_f(p, 2.0), 3.0, 1e-14);
}

TEST(FG, DomainErrors) {
    const auto p = fixtures::plain();
    EXPECT_THROW((void)eval_f(p, 0.0), PreconditionError);
    EXPECT_THROW((void)eval_f(p, -1.0), PreconditionError);
    EXPECT_THROW((void)eval_g(p, 0.0), PreconditionError);
    EXPECT_THROW((void)eval_g(p, -1.0), PreconditionError);
}

TEST(GammaStar, InfiniteWhenCoefficientsDominate) {
    auto p = fixtures::weak_competition(0.1);
    EXPECT_TRUE(std::isinf(gamma_star(p)));
}

TEST(GammaStar, SingleBindingRatio) {
    auto p = fixtures::weak_competition(0.0);
    p.chi1 = 1.0;
    p.k = 2.0;
    p.l = 0.1;
    p.a1 = 1.0;
    EXPECT_DOUBLE_EQ(gamma_star(p), 2.0);
}

TEST(GammaStar, RequiresPositiveCoefficients) {
    auto p = fixtures::weak_competition(0.1);
    p.a2 = 0.0;
    EXPECT_THROW((void)gamma_star(p), PreconditionError);
}

// ---------------------------------------------------------------- coexistence

TEST(CoexistenceGeneral, WeakCompetitionHolds) {
    const auto r = check_coexistence_general(fixtures::weak_competition());
    EXPECT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.find("weak_competition_lower")->slack, 1.0 - 0.5);
    EXPECT_DOUBLE_EQ(r.find("weak_competition_upper")->slack, 2.0 - 1.0);
    EXPECT_DOUBLE_EQ(r.find("coupling_product")->slack, 4.0 - 1.0);
    EXPECT_NE(r.find("H1.u"), nullptr);
}

TEST(CoexistenceGeneral, StrongA2BreaksLowerRatio) {
    auto p = fixtures::weak_competition();
    p.a2 = 3.0;
    const auto r = check_coexistence_general(p);
    EXPECT_FALSE(r.holds);
    EXPECT_DOUBLE_EQ(r.find("weak_competition_lower")->slack, 1.0 - 1.5);
}

TEST(CoexistenceGeneral, SelfLimitationBoundaryFails) {
    auto p = fixtures::weak_competition(0.25);
    p.a3 = 0.5;
    p.a1 = 2.0 * p.chi1 * p.k / p.d3 + p.omega_measure * std::abs(p.a3);
    const auto r = check_coexistence_general(p);
    EXPECT_DOUBLE_EQ(r.find("u_self_limitation")->slack, 0.0);
    EXPECT_FALSE(r.holds);
}

TEST(CoexistenceGeneral, DegenerateRatioDenominatorIsFailureWithNote) {
    auto p = fixtures::weak_competition();
    p.b1 = 0.0;
    const auto r = check_coexistence_general(p);
    EXPECT_FALSE(r.holds);
    EXPECT_TRUE(std::isnan(r.find("weak_competition_upper")->slack));
    ASSERT_FALSE(r.notes.empty());
}

TEST(CoexistenceGeneral, ScaleCheckAgainstDirectRatios) {
    oracle::ParamSampler sample(3, 0.05, 3.0);
    int holds = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        auto p = sample();
        p.chi1 = p.chi2 = 0.0;
        p.a3 = p.a4 = p.b3 = p.b4 = 0.0;
        const bool direct =
            p.a2 / p.b2 < p.a0 / p.b0 && p.a0 / p.b0 < p.a1 / p.b1 && p.a1 * p.b2 > p.a2 * p.b1;
        EXPECT_EQ(check_coexistence_general(p).holds, direct);
        holds += direct;
    }
    EXPECT_GT(holds, 100);
    EXPECT_LT(holds, 1900);
}

TEST(CoexistenceCompetitive, NoChemotaxisHolds) {
    const auto r = check_coexistence_competitive(fixtures::weak_competition());
    EXPECT_TRUE(r.holds);
}

TEST(CoexistenceCompetitive, ChemotaxisBoundIsNonStrict) {
    auto p = fixtures::weak_competition(0.1);
    p.a2 = p.chi1 * p.l / p.d3;
    const auto r = check_coexistence_competitive(p);
    const auto* m = r.find("a2_dominates_chemotaxis");
    EXPECT_DOUBLE_EQ(m->slack, 0.0);
    EXPECT_TRUE(m->satisfied());
    EXPECT_TRUE(r.holds);
}

TEST(CoexistenceCompetitive, LargeA3BreaksProduct) {
    auto p = fixtures::weak_competition(0.1);
    p.a3 = 1.9;  // left factor 2 - 0.2 - 1.9 < 0 while the right product stays positive
    const auto r = check_coexistence_competitive(p);
    EXPECT_LT(r.find("coupling_product")->slack, 0.0);
    EXPECT_FALSE(r.holds);
}

TEST(CoexistenceCompetitive, ReportsCompetitiveFlag) {
    auto p = fixtures::weak_competition(0.1);
    EXPECT_EQ(check_coexistence_competitive(p).notes.back(), "competitive_case: false");
    p.a3 = p.a4 = p.b3 = p.b4 = 0.01;
    EXPECT_EQ(check_coexistence_competitive(p).notes.back(), "competitive_case: true");
}

// ---------------------------------------------------------------- exclusion

TEST(Exclusion, HandExampleHolds) {
    const auto r = check_exclusion(fixtures::u_excluded());
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.notes.front(), "branch: b1 > chi2 k / d3");
    EXPECT_DOUBLE_EQ(r.find("invasion_product")->slack, 2.0 - 0.5);
    EXPECT_NEAR(r.find("v_growth_advantage")->slack, 2.0 - 1.0 / 1.5, 1e-15);
}

TEST(Exclusion, NegativeA4Fails) {
    auto p = fixtures::u_excluded();
    p.a4 = -0.1;
    const auto r = check_exclusion(p);
    EXPECT_FALSE(r.find("a4_nonnegative")->satisfied());
    EXPECT_FALSE(r.holds);
}

TEST(Exclusion, BranchBoundaryUsesSecondBranch) {
    auto p = fixtures::u_excluded(0.5);
    p.b1 = p.chi2 * p.k / p.d3;
    EXPECT_EQ(check_exclusion(p).notes.front(), "branch: b1 <= chi2 k / d3");
}

TEST(Exclusion, DegenerateDenominatorThrows) {
    auto p = fixtures::u_excluded();
    p.a4 = -p.a2 / p.omega_measure;
    EXPECT_THROW((void)check_exclusion(p), PreconditionError);
}

TEST(Exclusion, BranchesAgreeAtThresholdForNonnegativeB3) {
    oracle::ParamSampler sample(5, -1.0, 2.0);
    for (int trial = 0; trial < 2000; ++trial) {
        auto p = sample();
        p.b3 = std::abs(p.b3);
        p.b1 = p.chi2 * p.k / p.d3;
        const auto br = exclusion_branch_margins(p);
        EXPECT_LE(rel_diff(br.strong_b1, br.weak_b1), 1e-12);
    }
}

TEST(Exclusion, BranchGapForNegativeB3) {
    // With b3 < 0 the two branches differ at the threshold by
    // (b2 - chi2 l/d3 - |O|(b4)_-) |O| (b3)_- a0.
    oracle::ParamSampler sample(6, -1.0, 2.0);
    for (int trial = 0; trial < 500; ++trial) {
        auto p = sample();
        p.b3 = -std::abs(p.b3) - 0.01;
        p.b1 = p.chi2 * p.k / p.d3;
        const auto br = exclusion_branch_margins(p);
        const double v_cap = p.b2 - p.chi2 * p.l / p.d3 - p.omega_measure * negative_part(p.b4);
        const double gap = v_cap * p.omega_measure * negative_part(p.b3) * p.a0;
        EXPECT_LE(rel_diff(br.strong_b1 - br.weak_b1, gap), 1e-12);
    }
}

// ---------------------------------------------------------------- identities

TEST(Identities, H3MarginsEqualAlphaBeta) {
    oracle::ParamSampler sample(9);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto p = sample();
        const auto r = check_h3(p);
        const auto [alpha, beta] = alpha_beta(p);
        EXPECT_LE(rel_diff(r.margins[0].slack, alpha), 1e-12);
        EXPECT_LE(rel_diff(r.margins[1].slack, beta), 1e-12);
    }
}

TEST(Monotonicity, IncreasingA1NeverBreaksAReport) {
    oracle::ParamSampler sample(13);
    for (int trial = 0; trial < 1000; ++trial) {
        auto p = sample();
        auto q = p;
        q.a1 += sample.uniform(0.0, 2.0);
        EXPECT_LE(check_h1(p).holds, check_h1(q).holds);
        EXPECT_LE(check_h2(p).holds, check_h2(q).holds);
        EXPECT_LE(check_h3(p).holds, check_h3(q).holds);
        EXPECT_LE(check_h4(p, 3).holds, check_h4(q, 3).holds);
        EXPECT_LE(check_h5(p).holds, check_h5(q).holds);
        EXPECT_LE(check_h6(p, 3).holds, check_h6(q, 3).holds);
    }
}

// ---------------------------------------------------------------- classification

TEST(Classification, CoexistenceExample) {
    const auto s = check_all(fixtures::weak_competition());
    EXPECT_EQ(s.regime.asymptotics, Asymptotics::coexistence_general);
    ASSERT_FALSE(s.regime.global_existence.empty());
    EXPECT_EQ(s.regime.global_existence.front(), "H1");
}

TEST(Classification, ExclusionExample) {
    EXPECT_EQ(check_all(fixtures::u_excluded()).regime.asymptotics, Asymptotics::exclusion);
}

TEST(Classification, EverythingFails) {
    auto p = fixtures::plain();
    p.a1 = p.b2 = 0.1;
    p.a2 = p.b1 = -5.0;
    p.a3 = p.b4 = -3.0;
    p.a4 = 0.0;
    p.chi1 = p.chi2 = 4.0;
    const auto s = check_all(p, 3);
    EXPECT_EQ(s.regime.asymptotics, Asymptotics::unclassified);
    EXPECT_TRUE(s.regime.global_existence.empty());
    for (const auto& r : s.reports) {
        EXPECT_FALSE(r.holds) << r.name;
        if (r.name != "exclusion") {
            EXPECT_FALSE(r.margins.empty()) << r.name;
        }
    }
}
