#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "opdyn/equilibrium.hpp"
#include "opdyn/error.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/integrator.hpp"
#include "opdyn/simulation.hpp"

using namespace opdyn;

namespace {

InfluenceGraph two_agents(double a) {
  const double w[4] = {0.0, a, a, 0.0};
  return InfluenceGraph::from_dense(2, w, {Block::Left, Block::Right});
}

Trajectory constant_trajectory(std::vector<double> x, std::size_t states, double dt) {
  Trajectory t;
  t.step_size = dt;
  for (std::size_t k = 0; k < states; ++k) {
    t.times.push_back(static_cast<double>(k) * dt);
    t.states.push_back(x);
  }
  return t;
}

}  // namespace

TEST(Integrate, HorizonEqualToStepGivesTwoStates) {
  const auto tr = integrate({{0.3, -0.2}, 0.0}, two_agents(1.0),
                            PlatformParams::uniform(2, 1.0, 0.5), 0.01, 0.01);
  ASSERT_EQ(tr.size(), 2u);
  EXPECT_EQ(tr.times[0], 0.0);
  EXPECT_DOUBLE_EQ(tr.times[1], 0.01);
}

TEST(Integrate, RejectsBadGrid) {
  const auto g = two_agents(1.0);
  const auto p = PlatformParams::uniform(2, 1.0);
  EXPECT_THROW(integrate({{0.1, 0.2}, 0.0}, g, p, 0.0, 0.01), InvalidArgument);
  EXPECT_THROW(integrate({{0.1, 0.2}, 0.0}, g, p, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(integrate({{0.1}, 0.0}, g, p, 1.0, 0.01), InvalidArgument);
  EXPECT_THROW(integrate({{0.1, NAN}, 0.0}, g, p, 1.0, 0.01), InvalidArgument);
}

TEST(Integrate, UniformGridAndFinalTime) {
  const auto tr = integrate({{0.3, -0.2}, 0.0}, two_agents(1.0),
                            PlatformParams::uniform(2, 1.0, 0.5), 1.005, 0.01);
  EXPECT_GE(tr.final_time(), 1.005);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    EXPECT_NEAR(tr.times[k] - tr.times[k - 1], 0.01, 1e-12);
  }
}

TEST(Integrate, StepGuardRefines) {
  const auto p = PlatformParams::uniform(2, 1.0, 1e-3);
  EXPECT_EQ(step_refinement(0.01, p), 100u);
  EXPECT_EQ(step_refinement(1e-4, p), 1u);
  EXPECT_EQ(step_refinement(0.01, PlatformParams::uniform(2, 0.0, 1e-3)), 1u);
  const auto tr = integrate({{-0.4, 0.4}, 0.0}, two_agents(1.0), p, 0.1, 0.01);
  EXPECT_TRUE(tr.step_refined);
  EXPECT_LE(tr.integration_step, 1e-3 / 10.0 + 1e-18);
  EXPECT_EQ(tr.size(), 11u);
}

TEST(Integrate, TwoAgentReachesPdEquilibrium) {
  const auto tr = integrate({{-0.4, 0.4}, 0.0}, two_agents(1.0),
                            PlatformParams::uniform(2, 1.0, 1e-3), 10.0, 0.01);
  // Balanced start: x2 - x1 obeys y' = -3y + 2, so y(10) = 2/3 + e^{-30}(0.8 - 2/3).
  EXPECT_NEAR(tr.final_opinions()[0], -1.0 / 3.0, 1e-6);
  EXPECT_NEAR(tr.final_opinions()[1], 1.0 / 3.0, 1e-6);
}

TEST(Integrate, RecordEvery) {
  IntegrateOptions opt;
  opt.record_every = 10;
  const auto tr = integrate({{-0.4, 0.4}, 0.0}, two_agents(1.0),
                            PlatformParams::uniform(2, 1.0, 0.5), 1.0, 0.01, opt);
  EXPECT_EQ(tr.size(), 11u);
  EXPECT_NEAR(tr.step_size, 0.1, 1e-15);
  const auto full = integrate({{-0.4, 0.4}, 0.0}, two_agents(1.0),
                              PlatformParams::uniform(2, 1.0, 0.5), 1.0, 0.01);
  EXPECT_EQ(tr.final_opinions(), full.final_opinions());
}

TEST(DetectEquilibrium, ConstantAllOnes) {
  const auto g = two_agents(1.0);
  const auto p = PlatformParams::uniform(2, 1.0);
  const auto r = detect_equilibrium(constant_trajectory({1.0, 1.0}, 201, 0.01), g, p);
  EXPECT_EQ(r.kind, EquilibriumKind::ConsensusPlus);
  ASSERT_TRUE(r.limit);
  EXPECT_EQ(r.limit->opinions, (std::vector<double>{1.0, 1.0}));
}

TEST(DetectEquilibrium, ShortTrajectoryIsUndetermined) {
  const auto r = detect_equilibrium(constant_trajectory({1.0, 1.0}, 5, 0.01), two_agents(1.0),
                                    PlatformParams::uniform(2, 1.0));
  EXPECT_EQ(r.kind, EquilibriumKind::Undetermined);
  EXPECT_THROW(detect_equilibrium(Trajectory{}, two_agents(1.0), PlatformParams::uniform(2, 1.0)),
               InvalidArgument);
}

TEST(DetectEquilibrium, TwoAgentPd) {
  const auto g = two_agents(1.0);
  const auto p = PlatformParams::uniform(2, 1.0, 1e-3);
  const auto tr = integrate({{-0.4, 0.4}, 0.0}, g, p, 20.0, 0.01);
  const auto r = detect_equilibrium(tr, g, p);
  ASSERT_EQ(r.kind, EquilibriumKind::PersistentDisagreement);
  EXPECT_NEAR(r.limit->opinions[0], -1.0 / 3.0, 1e-6);
  EXPECT_NEAR(r.limit->opinions[1], 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(*r.polarization, 2.0 / 3.0, 1e-6);
  ASSERT_TRUE(r.settle_time);
  EXPECT_LT(*r.settle_time, 20.0);
}

TEST(DetectEquilibrium, CycleDoesNotConverge) {
  const auto g = cycle_demo_graph();
  const auto p = PlatformParams::uniform(4, 0.6, 0.1);
  const auto tr = integrate({{-0.5, 1.0, 0.5, -1.0}, 0.0}, g, p, 200.0, 0.01);
  const auto r = detect_equilibrium(tr, g, p);
  EXPECT_EQ(r.kind, EquilibriumKind::NonConvergent);
  EXPECT_FALSE(r.limit);
  // Not close to any fixed point: the field is far from zero at t = 200.
  EXPECT_GT(r.residual, 1e-2);
}

TEST(ClassifyLimit, AlphaScaledTargets) {
  EXPECT_EQ(classify_limit(std::vector<double>{0.5, 0.5}, 0.5, 1e-6), EquilibriumKind::ConsensusPlus);
  EXPECT_EQ(classify_limit(std::vector<double>{-0.5, -0.5 + 5e-6}, 0.5, 1e-6),
            EquilibriumKind::ConsensusMinus);
  EXPECT_EQ(classify_limit(std::vector<double>{0.5, 0.4}, 0.5, 1e-6),
            EquilibriumKind::PersistentDisagreement);
}

TEST(Simulate, AgreesWithDetectOnTwoAgents) {
  const auto g = two_agents(1.0);
  const auto p = PlatformParams::uniform(2, 1.0, 1e-3);
  const auto sim = simulate({{-0.4, 0.4}, 0.0}, g, p);
  ASSERT_EQ(sim.report.kind, EquilibriumKind::PersistentDisagreement);
  EXPECT_NEAR(sim.final_state.opinions[1], 1.0 / 3.0, 1e-6);
  EXPECT_LT(sim.report.residual, kDefaultTolerance);
}

TEST(Simulate, AbsorptionIsExactConsensus) {
  const auto g = two_agents(1.0);
  const auto p = PlatformParams::uniform(2, 0.5, 1e-3);
  const auto fast = simulate({{0.3, 0.6}, 0.0}, g, p);
  EXPECT_TRUE(fast.report.absorbed);
  EXPECT_EQ(fast.report.kind, EquilibriumKind::ConsensusPlus);
  SimulationSettings slow_settings;
  slow_settings.absorb_consensus = false;
  const auto slow = simulate({{0.3, 0.6}, 0.0}, g, p, slow_settings);
  EXPECT_FALSE(slow.report.absorbed);
  EXPECT_EQ(slow.report.kind, EquilibriumKind::ConsensusPlus);
  EXPECT_GT(slow.final_state.time, fast.final_state.time);
  // The absorbed limit is the exact fixed point; the slow run approaches it.
  ASSERT_TRUE(fast.report.limit);
  EXPECT_EQ(fast.report.limit->opinions, (std::vector<double>{1.0, 1.0}));
  EXPECT_LT(fast.final_state.opinions[0], 1.0);
  for (const double v : slow.report.limit->opinions) EXPECT_NEAR(v, 1.0, 1e-5);
}

TEST(Simulate, NearBandGuardMatchesUniformGuard) {
  gen::Engine e(11);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = gen::index(e, 2, 6);
    const auto g = gen::symmetric_graph(e, n, 0.7, 1.0);
    const auto p = PlatformParams::uniform(n, gen::uniform(e, 0.1, 2.0), 1e-2);
    const auto x0 = gen::vector(e, n, -1.0, 1.0);
    SimulationSettings uniform;
    uniform.guard = StepGuard::Uniform;
    uniform.absorb_consensus = false;
    SimulationSettings near = uniform;
    near.guard = StepGuard::NearBand;
    const auto a = simulate({x0, 0.0}, g, p, uniform);
    const auto b = simulate({x0, 0.0}, g, p, near);
    ASSERT_EQ(a.report.kind, b.report.kind) << "instance " << k;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(a.final_state.opinions[i], b.final_state.opinions[i], 1e-5);
    }
  }
}

TEST(Simulate, SamplesOnGrid) {
  SimulationSettings s;
  s.sample_interval = 0.1;
  s.stop_at_convergence = false;
  s.horizon = 2.0;
  const auto r = simulate({{-0.4, 0.4}, 0.0}, two_agents(1.0), PlatformParams::uniform(2, 1.0, 0.1), s);
  ASSERT_EQ(r.samples.size(), 21u);
  EXPECT_NEAR(r.sample_times.back(), 2.0, 1e-12);
  EXPECT_NEAR(r.final_state.time, 2.0, 1e-12);
}

// Property: a converged limit is a fixed point up to 10 tol.
TEST(Properties, FixedPointConsistency) {
  gen::Engine e(12);
  int converged = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = gen::index(e, 2, 6);
    const auto g = gen::symmetric_graph(e, n, 0.7, 1.0);
    const auto p = PlatformParams::uniform(n, gen::uniform(e, 0.2, 2.0), 1e-2);
    const auto x0 = gen::vector(e, n, -1.5, 1.5);
    const auto tr = integrate({x0, 0.0}, g, p, 60.0, 0.01);
    const auto r = detect_equilibrium(tr, g, p);
    if (!r.converged()) continue;
    ++converged;
    double res = 0.0;
    for (const double v : vector_field(r.limit->opinions, g, p)) res = std::max(res, std::abs(v));
    EXPECT_LT(res, 10.0 * kDefaultTolerance);
  }
  EXPECT_GT(converged, 150);
}
