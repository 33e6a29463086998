#include <chemolv/steady_states.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace chemolv;

TEST(CoexistenceState, WeakCompetitionThirds) {
    const auto s = coexistence_state(fixtures::weak_competition());
    EXPECT_NEAR(s.u, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.v, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.w, 2.0 / 3.0, 1e-15);
}

TEST(CoexistenceState, IndependentOfChemotaxisAndDiffusion) {
    auto p = fixtures::weak_competition(0.7);
    p.d1 = 5.0;
    p.d3 = 0.3;
    const auto s = coexistence_state(p);
    EXPECT_NEAR(s.u, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.v, 1.0 / 3.0, 1e-15);
}

TEST(CoexistenceState, SingularDeterminantThrows) {
    auto p = fixtures::weak_competition();
    p.a1 = p.b1 = p.a2 = p.b2 = 1.0;
    EXPECT_THROW((void)coexistence_state(p), PreconditionError);
}

TEST(CoexistenceState, IsAnEquilibriumOfTheKinetics) {
    oracle::ParamSampler sample(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = sample();
        const auto s = coexistence_state(p);
        const auto ode = oracle::HomogeneousOde::from(p);
        // Growth rates vanish (the nontrivial equilibrium of both per-capita rates).
        const double gu = ode.a0 - ode.a_uu * s.u - ode.a_uv * s.v;
        const double gv = ode.b0 - ode.b_vu * s.u - ode.b_vv * s.v;
        const double scale = 1.0 + std::abs(s.u) + std::abs(s.v);
        EXPECT_LE(std::abs(gu), 1e-9 * scale * (1.0 + std::abs(ode.a_uu) + std::abs(ode.a_uv)));
        EXPECT_LE(std::abs(gv), 1e-9 * scale * (1.0 + std::abs(ode.b_vu) + std::abs(ode.b_vv)));
        EXPECT_NEAR(p.lambda * s.w, p.k * s.u + p.l * s.v, 1e-9 * scale * (p.k + p.l));
    }
}

TEST(ExclusionState, HalfCapacity) {
    auto p = fixtures::plain();
    p.b2 = 2.0;
    const auto s = exclusion_state(p);
    EXPECT_EQ(s.u, 0.0);
    EXPECT_DOUBLE_EQ(s.v, 0.5);
    EXPECT_DOUBLE_EQ(s.w, 0.5);
}

TEST(ExclusionState, NonlocalCapacity) {
    auto p = fixtures::u_excluded();
    p.b4 = 1.0;
    p.omega_measure = 2.0;
    const auto s = exclusion_state(p);
    EXPECT_DOUBLE_EQ(s.v, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.w, 2.0 / 3.0);
}

TEST(ExclusionState, NonpositiveDenominatorThrows) {
    auto p = fixtures::plain();
    p.b4 = -1.0;
    EXPECT_THROW((void)exclusion_state(p), PreconditionError);
}

TEST(SemiTrivial, BothStates) {
    auto p = fixtures::weak_competition();
    p.k = 3.0;
    p.lambda = 2.0;
    const auto [su, sv] = semi_trivial_states(p);
    EXPECT_DOUBLE_EQ(su.u, 0.5);
    EXPECT_EQ(su.v, 0.0);
    EXPECT_DOUBLE_EQ(su.w, 0.75);
    EXPECT_EQ(sv.u, 0.0);
    EXPECT_DOUBLE_EQ(sv.v, 0.5);
}

TEST(LinfBounds, WeakCompetitionScenario) {
    const auto p = fixtures::weak_competition(0.1);
    const auto b = linf_bounds(p, 0.6, 0.6);
    // L = 2 - 0.2 = 1.8 for both rows
    EXPECT_NEAR(b.l_const, 1.8, 1e-15);
    EXPECT_NEAR(b.m00, std::max(0.36, 4.0 / (4.0 * 1.8 * 1.8)), 1e-15);
    // A = 1.9, coupling 0.1
    const double root = (1.0 + std::sqrt(1.0 + 4.0 * 1.9 * 0.1 * b.m00)) / (2.0 * 1.9);
    EXPECT_NEAR(b.m01, root, 1e-15);
    EXPECT_NEAR(b.cap_u, std::max(0.6, root), 1e-15);
    EXPECT_NEAR(b.cap_v, b.cap_u, 1e-15);
}

TEST(LinfBounds, NoCouplingGivesLogisticCap) {
    auto p = fixtures::plain();
    p.a1 = 4.0;
    p.b2 = 2.0;
    const auto b = linf_bounds(p, 0.1, 0.1);
    EXPECT_DOUBLE_EQ(b.m01, 0.25);
    EXPECT_DOUBLE_EQ(b.m02, 0.5);
}

TEST(LinfBounds, RequiresH1) {
    auto p = fixtures::weak_competition(1.0);
    EXPECT_THROW((void)linf_bounds(p, 1.0, 1.0), PreconditionError);
}

TEST(L1Bounds, UnitExample) {
    auto p = fixtures::plain();
    p.a1 = p.b2 = 2.0;
    // du = dv = 2, M = max(1, 4 / 16) = 1
    const auto b = l1_bounds(p, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(b.m_l1, 1.0);
    EXPECT_DOUBLE_EQ(b.mass_u_cap, 1.0);
    EXPECT_DOUBLE_EQ(b.mass_v_cap, 1.0);
}

TEST(L1Bounds, NonlocalCooperationRaisesCaps) {
    auto p = fixtures::plain();
    p.a1 = p.b2 = 2.0;
    p.a4 = p.b3 = -0.5;
    const auto b = l1_bounds(p, 0.1, 0.1);
    // du = dv = 1.5, M = 4 / 9
    EXPECT_NEAR(b.m_l1, 4.0 / 9.0, 1e-15);
    const double cap = (1.0 + std::sqrt(1.0 + 4.0 * 2.0 * 0.5 * b.m_l1)) / 4.0;
    EXPECT_NEAR(b.mass_u_cap, cap, 1e-15);
    EXPECT_NEAR(b.mass_v_cap, cap, 1e-15);
}

TEST(L1Bounds, Preconditions) {
    auto p = fixtures::plain();
    p.a2 = -0.1;
    EXPECT_THROW((void)l1_bounds(p, 1, 1), PreconditionError);
    p = fixtures::plain();
    p.a3 = -2.0;
    EXPECT_THROW((void)l1_bounds(p, 1, 1), PreconditionError);
}

TEST(AlphaBeta, UnitCooperation) {
    auto p = fixtures::plain();
    p.a1 = p.b2 = 2.0;
    p.a2 = p.b1 = -1.0;
    const auto [alpha, beta] = alpha_beta(p);
    EXPECT_DOUBLE_EQ(alpha, 1.0);
    EXPECT_DOUBLE_EQ(beta, 1.0);
    EXPECT_DOUBLE_EQ(mass_sum_cap(p, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(mass_sum_cap(p, 3.0), 3.0);
}

TEST(AlphaBeta, CooperativeFixture) {
    const auto p = fixtures::cooperative();
    const auto [alpha, beta] = alpha_beta(p);
    EXPECT_DOUBLE_EQ(alpha, 1.5);
    EXPECT_DOUBLE_EQ(beta, 1.5);
    EXPECT_NEAR(mass_sum_cap(p, 0.0), 4.0 / 3.0, 1e-15);
    const auto s = coexistence_state(p);
    EXPECT_NEAR(s.u, 0.6, 1e-15);
    EXPECT_NEAR(s.v, 0.4, 1e-15);
}

TEST(AlphaBeta, MassCapRequiresPositiveMinimum) {
    auto p = fixtures::plain();
    p.a2 = p.b1 = -2.0;
    EXPECT_THROW((void)mass_sum_cap(p, 1.0), PreconditionError);
}
