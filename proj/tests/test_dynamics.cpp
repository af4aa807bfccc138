#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "grenier/dynamics.hpp"
#include "grenier/experiments.hpp"
#include "oracles.hpp"

using namespace grenier;

namespace {

constexpr double kPi = std::numbers::pi;

SemiclassicalState constant_state(const Grid& g, double re, double im, double vx, double vy,
                                  double eps) {
  return SemiclassicalState(ComplexField(ScalarField(g, re), ScalarField(g, im)),
                            VectorField(ScalarField(g, vx), ScalarField(g, vy)), 0.0, eps);
}

SemiclassicalState smooth_random_state(const Grid& g, double eps, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double w = 2 * kPi / g.side();
  auto field = [&] {
    const double c0 = d(rng), c1 = d(rng), c2 = d(rng), c3 = d(rng);
    return ScalarField::sample(g, [=](double x, double y) {
      return c0 + c1 * std::sin(w * x) + c2 * std::cos(w * y) + c3 * std::cos(w * (2 * x - y));
    });
  };
  auto re = field(), im = field(), vx = field(), vy = field();
  return SemiclassicalState(ComplexField(re, im), VectorField(vx, vy), 0.0, eps);
}

void expect_all_zero(const Tendency& t) {
  for (std::size_t k = 0; k < t.da.size(); ++k) {
    EXPECT_EQ(t.da.re[k], 0.0);
    EXPECT_EQ(t.da.im[k], 0.0);
    EXPECT_EQ(t.dv.x[k], 0.0);
    EXPECT_EQ(t.dv.y[k], 0.0);
  }
}

double momentum_error(const SemiclassicalState& s, const std::array<double, 2>& ref) {
  const auto p = momentum(s);
  return std::max(std::abs(p[0] / ref[0] - 1), std::abs(p[1] / ref[1] - 1));
}

}  // namespace

TEST(Rhs, ConstantStatesAreStationary) {
  const auto g = make_grid(1.0, 10);
  expect_all_zero(rhs(constant_state(g, 0.3, -1.2, 0, 0, 0.5)));
  expect_all_zero(rhs(constant_state(g, 0.3, -1.2, 2.0, -0.7, 0.5)));
}

TEST(Rhs, RealProfileAtRestMatchesOracle) {
  const double L = 0.5, eps = 0.1;
  const auto g = make_grid(L, 50);
  const auto env = ScalarField::sample(g, [&](double x, double y) {
    return std::exp(-80 * ((x - L / 2) * (x - L / 2) + (y - L / 2) * (y - L / 2)));
  });
  const SemiclassicalState s(ComplexField(env, env), VectorField(g), 0.0, eps);
  const auto t = rhs(s);
  const auto ref = oracle::rhs(s, eps);

  ScalarField two_g2(g);
  for (std::size_t k = 0; k < g.size(); ++k) two_g2[k] = 2 * env[k] * env[k];
  const auto grad = gradient(two_g2);
  const auto lap = laplacian_c(s.a);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(t.dv.x[k], ref.dv_x[k], 1e-12);
    EXPECT_NEAR(t.dv.y[k], ref.dv_y[k], 1e-12);
    EXPECT_NEAR(t.da.re[k], ref.da_re[k], 1e-10);
    EXPECT_NEAR(t.da.im[k], ref.da_im[k], 1e-10);
    EXPECT_DOUBLE_EQ(t.dv.x[k], -grad.x[k]);
    EXPECT_DOUBLE_EQ(t.dv.y[k], -grad.y[k]);
    EXPECT_DOUBLE_EQ(t.da.re[k], -0.05 * lap.im[k]);
    EXPECT_DOUBLE_EQ(t.da.im[k], 0.05 * lap.re[k]);
  }
}

TEST(Rhs, ZeroEpsIsTheSymmetrizedEulerDiscretization) {
  std::mt19937 rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = smooth_random_state(make_grid(1.0, 24), 0.0, rng);
    const auto t = rhs(s);
    const auto ref = oracle::rhs(s, 0.0);
    for (std::size_t k = 0; k < s.grid().size(); ++k) {
      EXPECT_NEAR(t.dv.x[k], ref.dv_x[k], 1e-14 * std::max(1.0, std::abs(ref.dv_x[k])));
      EXPECT_NEAR(t.da.im[k], ref.da_im[k], 1e-14 * std::max(1.0, std::abs(ref.da_im[k])));
    }
  }
}

TEST(EulerStep, StationaryStateOnlyAdvancesTime) {
  const auto s = constant_state(make_grid(1.0, 8), 1.0, 0.5, 0.2, 0.1, 0.3);
  const auto next = euler_step(s, 0.01);
  EXPECT_EQ(next.a, s.a);
  EXPECT_EQ(next.v, s.v);
  EXPECT_DOUBLE_EQ(next.t, 0.01);
}

TEST(EulerStep, UnprojectedStepDriftsMass) {
  const auto s = initial_condition(ExperimentCase::defaults(CaseId::near_zero_current), 0.0);
  const double k = StepControl{}.time_step(s.grid());
  const auto half = euler_step(s, k);
  EXPECT_NE(mass(half), mass(s));
}

TEST(EulerStep, NonFiniteResultIsBlowUp) {
  auto s = constant_state(make_grid(1.0, 8), 1.0, 0.0, 0.0, 0.0, 0.0);
  s.a.re(3, 3) = 1e200;
  try {
    euler_step(s, 1e200, 17);
    FAIL() << "expected BlowUpError";
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.step(), 17u);
  }
  EXPECT_THROW(euler_step(s, 0.0), ConfigError);
}

TEST(ProjectMass, QuarteredTargetHalvesAmplitude) {
  const auto s = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.1);
  const double m = mass(s);
  const auto out = project_mass(s, m / 4);
  for (std::size_t k = 0; k < s.grid().size(); ++k) {
    EXPECT_EQ(out.a.re[k], 0.5 * s.a.re[k]);
    EXPECT_EQ(out.a.im[k], 0.5 * s.a.im[k]);
  }
  EXPECT_EQ(out.v, s.v);
  EXPECT_EQ(project_mass(s, m).a, s.a);
}

TEST(ProjectMass, RandomPerturbationsRestoreMass) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> target(0.1, 10.0);
  for (int i = 0; i < 50; ++i) {
    const auto s = smooth_random_state(make_grid(0.5, 16), 0.01, rng);
    const double i1 = target(rng);
    EXPECT_NEAR(mass(project_mass(s, i1)) / i1, 1.0, 1e-12);
  }
}

TEST(ProjectMass, VanishingAmplitudeIsDegenerate) {
  const auto s = constant_state(make_grid(1.0, 8), 0, 0, 1, 1, 0.1);
  EXPECT_THROW(project_mass(s, 1.0), DegenerateProjectionError);
  EXPECT_NO_THROW(project_mass(s, 0.0));
}

TEST(ProjectMomentum, MatchingMomentumIsIdentity) {
  const auto s = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.0);
  const auto out = project_momentum(s, momentum(s), 1e-8);
  for (std::size_t k = 0; k < s.grid().size(); ++k) {
    EXPECT_NEAR(out.v.x[k], s.v.x[k], 1e-15);
    EXPECT_NEAR(out.v.y[k], s.v.y[k], 1e-15);
  }
}

TEST(ProjectMomentum, RestoresNonzeroCurrentAfterOneStep) {
  for (double eps : {0.0, 0.001, 0.01, 0.1}) {
    const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), eps);
    const auto ref = invariants(s0);
    const auto half = euler_step(s0, StepControl{}.time_step(s0.grid()));
    const auto massed = project_mass(half, ref.i1);
    std::array<bool, 2> skipped{true, true};
    const auto out = project_momentum(massed, ref.i3, 1e-8, MomentumScaling::exact, &skipped);
    EXPECT_FALSE(skipped[0]);
    EXPECT_FALSE(skipped[1]);
    EXPECT_LE(momentum_error(out, ref.i3), 1e-10) << "eps = " << eps;
  }
}

TEST(ProjectMomentum, RatioScalingAgreesWithExactAtZeroEps) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.0);
  const auto ref = invariants(s0);
  const auto half = project_mass(euler_step(s0, 1e-4), ref.i1);
  const auto a = project_momentum(half, ref.i3, 1e-8, MomentumScaling::exact);
  const auto b = project_momentum(half, ref.i3, 1e-8, MomentumScaling::ratio);
  for (std::size_t k = 0; k < s0.grid().size(); ++k) EXPECT_NEAR(a.v.x[k], b.v.x[k], 1e-16);
}

TEST(ProjectMomentum, GuardSkipsTinyMomentum) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::near_zero_current), 0.01);
  const auto ref = invariants(s0);
  const auto half = project_mass(euler_step(s0, 2.5e-5), ref.i1);
  std::array<bool, 2> skipped{false, false};
  const auto out = project_momentum(half, ref.i3, 1e-8, MomentumScaling::exact, &skipped);
  EXPECT_TRUE(skipped[0]);
  EXPECT_TRUE(skipped[1]);
  EXPECT_EQ(out.v, half.v);
}

TEST(Advance, WithoutProjectionsEqualsEulerStep) {
  const auto s = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.01);
  StepControl ctrl;
  ctrl.project_mass = false;
  ctrl.project_momentum = false;
  const auto a = advance(s, ctrl, invariants(s));
  const auto b = euler_step(s, ctrl.time_step(s.grid()));
  EXPECT_EQ(a, b);
}

TEST(Advance, HundredStepsHoldMassAndMomentum) {
  for (double eps : {0.0, 0.01}) {
    auto s = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), eps);
    const auto ref = invariants(s);
    const StepControl ctrl;
    for (int step = 0; step < 100; ++step) {
      s = advance(s, ctrl, ref);
      ASSERT_LE(std::abs(mass(s) / ref.i1 - 1), 1e-12) << "step " << step;
      ASSERT_LE(momentum_error(s, ref.i3), 1e-10) << "step " << step;
    }
  }
}

TEST(Advance, ConstantStateIsFixedPoint) {
  auto s = constant_state(make_grid(1.0, 8), 0.8, -0.3, 0.4, -0.9, 0.2);
  const auto s0 = s;
  const auto ref = invariants(s);
  for (int i = 0; i < 500; ++i) s = advance(s, StepControl{}, ref);
  EXPECT_EQ(s.a, s0.a);
  EXPECT_EQ(s.v, s0.v);
}

TEST(Evolve, ZeroFinalTimeReturnsInitialState) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.01);
  EXPECT_EQ(evolve(s0, StepControl{}, 0.0), s0);
}

TEST(Evolve, NearZeroCurrentRunTakesFourThousandSteps) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::near_zero_current), 0.01);
  std::size_t last_step = 0;
  double j2_late = 1.0;
  Observer obs{1, [&](const StepReport& r) {
                 last_step = r.step;
                 j2_late = r.ratios.j2;
                 if (r.step == 0) {
                   EXPECT_EQ(r.ratios.j2, 1.0);
                 }
               }};
  const auto s = evolve(s0, StepControl{}, 0.1, {obs});
  EXPECT_EQ(last_step, 4000u);
  EXPECT_EQ(s.t, 0.1);
  EXPECT_TRUE(s.finite());
  // energy is not a projected quantity
  EXPECT_GT(std::abs(j2_late - 1), 1e-6);
}

TEST(Evolve, ShortensFinalStepToLandOnT) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.01);
  std::vector<double> steps;
  Observer obs{1, [&](const StepReport& r) {
                 if (r.step) steps.push_back(r.last_step);
               }};
  const auto s = evolve(s0, StepControl{}, 3.3e-4, {obs});
  EXPECT_EQ(s.t, 3.3e-4);
  ASSERT_EQ(steps.size(), 14u);
  EXPECT_NEAR(steps.back(), 3.3e-4 - 13 * 2.5e-5, 1e-15);
}

TEST(Evolve, ObserverStrideIncludesFirstAndLast) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.0);
  std::vector<std::size_t> seen;
  Observer obs{4, [&](const StepReport& r) { seen.push_back(r.step); }};
  evolve(s0, StepControl{}, 10 * 2.5e-5, {obs});
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 4, 8, 10}));
  EXPECT_THROW(evolve(s0, StepControl{}, 1e-4, {Observer{0, [](const StepReport&) {}}}), ConfigError);
}

TEST(Evolve, VacuumCaseRunsThrough) {
  for (double eps : {0.001, 0.01, 0.1}) {
    const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::sign_changing), eps);
    const auto s = evolve(s0, StepControl{}, 0.05);
    EXPECT_TRUE(s.finite());
    EXPECT_EQ(s.t, 0.05);
  }
}

TEST(Evolve, BlowUpCarriesTime) {
  auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.0);
  s0.v.x(10, 10) = 1e300;
  s0.v.x(11, 10) = -1e300;
  StepControl ctrl;
  ctrl.project_mass = false;
  ctrl.project_momentum = false;
  try {
    evolve(s0, ctrl, 1.0);
    FAIL() << "expected BlowUpError";
  } catch (const BlowUpError& e) {
    EXPECT_GE(e.step(), 1u);
    EXPECT_GT(e.time(), 0.0);
  }
}

TEST(Properties, RunsAreBitReproducible) {
  const auto s0 = initial_condition(ExperimentCase::defaults(CaseId::nonzero_current), 0.01);
  EXPECT_EQ(evolve(s0, StepControl{}, 0.01), evolve(s0, StepControl{}, 0.01));
}
