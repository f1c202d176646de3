#include <gtest/gtest.h>

#include <cmath>

#include "mfgc/dynamics.hpp"
#include "mfgc/stability.hpp"
#include "oracles.hpp"

namespace mfgc {
namespace {

LinearizationMatrix matrix(double a, double b, double c, double d)
{
    LinearizationMatrix m;
    m.a = {{{a, b}, {c, d}}};
    return m;
}

TEST(Jacobian, NoInteractionCorruptPoint)
{
    const auto m = jacobian(oracle::baseline(), PopulationState::make(1.0 / 3, 1.0 / 3, 1.0 / 3), kCorrupt);
    EXPECT_DOUBLE_EQ(m.a[0][0], -2.0);
    EXPECT_DOUBLE_EQ(m.a[0][1], -1.0);
    EXPECT_DOUBLE_EQ(m.a[1][0], 1.0);
    EXPECT_DOUBLE_EQ(m.a[1][1], -1.0);
}

TEST(Jacobian, HonestBoundaryEigenvalues)
{
    oracle::ParamSampler gen(41);
    for (int i = 0; i < 500; ++i) {
        const auto p = gen.draw();
        const auto m = jacobian(p, PopulationState::make(0, 1, 0), kHonest);
        auto ev = oracle::eigenvalues(m.a);
        double e1 = ev[0].real(), e2 = ev[1].real();
        if (e1 > e2) std::swap(e1, e2);
        double a = -p.r, b = p.q_inf - p.q_soc - p.lambda - p.b;
        if (a > b) std::swap(a, b);
        EXPECT_NEAR(e1, a, 1e-9 * (1 + std::abs(a)));
        EXPECT_NEAR(e2, b, 1e-9 * (1 + std::abs(b)));
    }
}

TEST(Jacobian, MatchesFiniteDifferences)
{
    oracle::ParamSampler gen(42);
    for (int i = 0; i < 1000; ++i) {
        const auto p = gen.draw();
        const auto x = gen.state();
        const auto s = kAllProfiles[static_cast<std::size_t>(i % 4)];
        const auto m = jacobian(p, x, s);
        const auto fd = oracle::fd_jacobian(p, x.H(), x.C(), s.uH(), s.uC());
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) EXPECT_NEAR(m.a[r][c], fd[r][c], 1e-6);
        }
    }
}

TEST(TraceDet, HandExamples)
{
    const auto v = trace_det_verdict(matrix(-2, -1, 1, -1));
    EXPECT_EQ(v.classification, Classification::Stable);
    EXPECT_EQ(v.method, StabilityMethod::TraceDet);
    EXPECT_NEAR(v.eigen_real_parts[0], -1.5, 1e-15);
    EXPECT_NEAR(v.eigen_real_parts[1], -1.5, 1e-15);

    EXPECT_EQ(trace_det_verdict(matrix(1, 0, 0, -1)).classification, Classification::Unstable);
    EXPECT_EQ(trace_det_verdict(matrix(1, -1, 1, 1)).classification, Classification::Unstable);
    EXPECT_EQ(trace_det_verdict(matrix(0, -1, 1, 0)).classification, Classification::Marginal);
    EXPECT_EQ(trace_det_verdict(matrix(-1, 0, 0, 1e-12)).classification, Classification::Marginal);
}

TEST(TraceDet, EquivalentToExplicitRoots)
{
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 20000; ++i) {
        const auto m = matrix(u(gen), u(gen), u(gen), u(gen));
        const auto ev = oracle::eigenvalues(m.a);
        const double lead = std::max(ev[0].real(), ev[1].real());
        const auto v = trace_det_verdict(m);
        EXPECT_NEAR(v.eigen_real_parts[0], lead, 1e-9);
        EXPECT_GE(v.eigen_real_parts[0], v.eigen_real_parts[1]);
        if (lead < -1e-6) {
            EXPECT_EQ(v.classification, Classification::Stable);
            EXPECT_TRUE(m.trace() < 0 && m.det() > 0);
        } else if (lead > 1e-6) {
            EXPECT_EQ(v.classification, Classification::Unstable);
            EXPECT_TRUE(m.trace() > 0 || m.det() < 0);
        }
    }
}

TEST(CorruptBand, Examples)
{
    EXPECT_TRUE(theorem2_corrupt_condition(oracle::params(1, 1, 1, 0, 3, 3, 0, 1, 2)));
    EXPECT_TRUE(theorem2_corrupt_condition(oracle::params(0.01, 7, 0.02, 0, 0.4, 0.4, 0, 1, 2)));
    EXPECT_FALSE(theorem2_corrupt_condition(oracle::three_equilibria()));
    EXPECT_TRUE(theorem2_corrupt_condition(oracle::baseline()));
}

TEST(ClassifyEquilibrium, ThreeEquilibriaVerdicts)
{
    const auto p = oracle::three_equilibria();
    const auto eq = enumerate_equilibria(p);
    ASSERT_EQ(eq.size(), 3u);

    const auto corrupt = classify_equilibrium(p, eq[0]);
    EXPECT_EQ(corrupt.method, StabilityMethod::InconclusiveFellBack);
    ASSERT_TRUE(corrupt.theorem_flags.corrupt_band.has_value());
    EXPECT_FALSE(*corrupt.theorem_flags.corrupt_band);
    const auto fallback = trace_det_verdict(jacobian(p, eq[0].state, kCorrupt));
    EXPECT_EQ(corrupt.classification, fallback.classification);

    const auto interior = classify_equilibrium(p, eq[1]);
    EXPECT_EQ(interior.classification, Classification::Stable);
    EXPECT_EQ(interior.method, StabilityMethod::Theorem2Sufficient);

    const auto boundary = classify_equilibrium(p, eq[2]);
    EXPECT_NEAR(p.q_inf - p.q_soc - p.lambda - p.b, 1.2, 1e-15);
    EXPECT_EQ(boundary.classification, Classification::Unstable);
    EXPECT_EQ(boundary.method, StabilityMethod::Theorem2Sufficient);
    EXPECT_NEAR(boundary.eigen_real_parts[0], 1.2, 1e-12);
    EXPECT_NEAR(boundary.eigen_real_parts[1], -1.0, 1e-12);
}

TEST(ClassifyEquilibrium, NoInteractionStable)
{
    const auto p = oracle::baseline();
    const auto v = classify_equilibrium(p, enumerate_equilibria(p)[0]);
    EXPECT_EQ(v.classification, Classification::Stable);
    EXPECT_EQ(v.method, StabilityMethod::Theorem2Sufficient);
    const auto w = classify_equilibrium(p, no_interaction_equilibrium(p));
    EXPECT_EQ(w.classification, Classification::Stable);
}

TEST(ClassifyEquilibrium, BandImpliesStableProperty)
{
    oracle::ParamSampler gen(44);
    int hits = 0;
    for (int i = 0; hits < 1000 && i < 200000; ++i) {
        auto p = gen.draw();
        if (!theorem2_corrupt_condition(p)) continue;
        ++hits;
        const auto root = corrupt_root(p);
        const auto v = trace_det_verdict(jacobian(p, PopulationState::from_reduced(root.x_H, root.x_C), kCorrupt));
        EXPECT_EQ(v.classification, Classification::Stable);
    }
    EXPECT_EQ(hits, 1000);
}

TEST(ClassifyEquilibrium, InteriorCoefficientsMatchCharacteristic)
{
    oracle::ParamSampler gen(45);
    int seen = 0;
    for (int i = 0; i < 20000; ++i) {
        const auto p = gen.draw();
        const auto pt = honest_interior(p);
        if (!pt) continue;
        ++seen;
        const auto m = jacobian(p, PopulationState::from_reduced(pt->x_H, pt->x_C), kHonest);
        const auto [c1, c0] = honest_interior_characteristic(p);
        // xi^2 - trace xi + det
        EXPECT_NEAR(c1, -m.trace(), 1e-9 * (1 + std::abs(c1)));
        EXPECT_NEAR(c0, m.det(), 1e-9 * (1 + std::abs(c0)));
        if (c1 > 0 && c0 > 0) {
            EXPECT_EQ(trace_det_verdict(m).classification, Classification::Stable);
        }
    }
    EXPECT_GT(seen, 100);
}

TEST(ClassifyEquilibrium, NeverContradictsOverRandomParameters)
{
    oracle::ParamSampler gen(46);
    for (int i = 0; i < 5000; ++i) {
        const auto p = gen.draw();
        for (const auto& e : enumerate_equilibria(p)) {
            EXPECT_NO_THROW(classify_equilibrium(p, e));
        }
    }
}

std::vector<PopulationState> perturbations(const PopulationState& x, double eps, int count)
{
    // step of length eps toward random simplex points; feasible by convexity
    oracle::ParamSampler gen(static_cast<std::uint64_t>(count));
    std::vector<PopulationState> out;
    while (static_cast<int>(out.size()) < count) {
        const auto y = gen.state();
        const double d = y.distance(x);
        if (d < eps) continue;
        const double t = eps / d;
        out.push_back(PopulationState::renormalized(x.R() + t * (y.R() - x.R()), x.H() + t * (y.H() - x.H()),
                                                    x.C() + t * (y.C() - x.C())));
    }
    return out;
}

TEST(ClassifyEquilibrium, DynamicCorroboration)
{
    const auto p = oracle::three_equilibria();
    for (const auto& e : enumerate_equilibria(p)) {
        const auto v = classify_equilibrium(p, e);
        const auto starts = perturbations(e.state, 1e-3, 20);
        ASSERT_FALSE(starts.empty());
        double worst = 0.0;
        for (const auto& x0 : starts) {
            const auto tr = integrate_ode(p, x0, e.strategy, 200.0, 0.01);
            worst = std::max(worst, tr.final_state().distance(e.state));
        }
        if (v.classification == Classification::Stable) {
            EXPECT_LE(worst, 1e-6) << to_string(e.provenance);
        }
        if (v.classification == Classification::Unstable) {
            EXPECT_GT(worst, 1e-2) << to_string(e.provenance);
        }
    }
}

} // namespace
} // namespace mfgc
