#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rothevi/rothevi.hpp"
#include "support/instances.hpp"

namespace rothevi {
namespace {

using testing::scalar_config;
using testing::scalar_problem;

Load scalar_load(TemporalProfile profile) {
  return Load::separable(Vector::Ones(1), std::move(profile));
}

TEST(AverageLoad, ConstantLinearAndQuadraticProfiles) {
  const Load c = Load::constant(Vector{{1.5, -2.0}});
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(average_load(c, n, 0.3), c.at(0.0));
  EXPECT_NEAR(average_load(scalar_load(TemporalProfile::linear(0.0, 1.0)), 1, 2.0)[0], 1.0,
              1e-15);
  const Load sq = scalar_load(TemporalProfile::custom([](double t) { return t * t; }));
  EXPECT_NEAR(average_load(sq, 1, 1.0)[0], 1.0 / 3.0, 1e-14);
  EXPECT_THROW((void)average_load(c, 0, 0.1), ContractError);
}

TEST(AverageLoad, TabulatedLoadIsAveragedExactly) {
  const Load l = Load::tabulated({0.0, 0.25}, {Vector{{1.0}}, Vector{{3.0}}});
  // On (0, 0.5]: half the interval at 1, half at 3.
  EXPECT_DOUBLE_EQ(average_load(l, 1, 0.5)[0], 2.0);
  EXPECT_DOUBLE_EQ(average_load(l, 2, 0.5)[0], 3.0);
}

TEST(ComputeBeta, QuadraticFixtureAndLimits) {
  EXPECT_NEAR(compute_beta(1.0, 1.0, 1.0, 1.0), 2.0 + 2.0 * std::sqrt(2.0), 1e-10);
  EXPECT_EQ(compute_beta(3.0, 0.0, 2.0, 5.0), 0.0);
  EXPECT_EQ(compute_beta(3.0, 1.0, 2.0, 0.0), 0.0);
}

TEST(ComputeBeta, IncreasesWithLoadEnergy) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double E0 = u(rng), F = u(rng), th = 1.0 + u(rng), Mp = u(rng);
    EXPECT_GT(compute_beta(E0, 2.0 * F, th, Mp), compute_beta(E0, F, th, Mp));
  }
}

TEST(ComputeTStar, FormulaAndDegenerateCase) {
  EXPECT_EQ(compute_T_star(0.5, 0.5, 2.0, 1.0, 10.0), 0.0625);
  EXPECT_EQ(compute_T_star(0.0, 0.0, 2.0, 1.0, 10.0), 10.0);
  EXPECT_EQ(compute_T_star(1.0, 1.0, 2.0, 0.0, 3.0), 3.0);
}

TEST(ComputeTStar, DecreasesWithInitialEnergy) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double E0 = u(rng), b = u(rng), th = 1.0 + u(rng), Mp = u(rng);
    EXPECT_LT(compute_T_star(2.0 * E0, b, th, Mp, 1e9), compute_T_star(E0, b, th, Mp, 1e9));
  }
}

TEST(AdmissibleDt, ClosedFormValues) {
  ConstantsLedger l;
  EXPECT_EQ(admissible_dt_bound(3.0, 7.0, l), 2.0);
  l.theta1 = {4.0};
  l.theta2 = {2.0};
  l.C_H1 = {1.0};
  // E0 chosen so that 2^{1+1/θ2}(E0 + β) = 1.
  EXPECT_NEAR(admissible_dt_bound(std::pow(2.0, -1.5), 0.0, l), 1.0 / 108.5, 1e-15);
  double prev = kInfinity;
  for (double E0 : {0.1, 0.2, 0.5, 1.0, 2.0}) {
    const double d = admissible_dt_bound(E0, 0.1, l);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(RotheRun, ScalarDecayMatchesBackwardEuler) {
  const Problem p = scalar_problem();
  const Trajectory one = rothe_steps(p, scalar_config(1.0, 0.0, 0.5, 1.0), 1);
  EXPECT_NEAR(one.states[1][0], 2.0 / 3.0, 1e-14);

  const Preset lin = preset("linear_scalar");
  const Trajectory t = rothe_run(build(lin.spec), lin.config);
  ASSERT_EQ(t.steps(), static_cast<int>(std::ceil(t.T_star / t.dt - 1e-9)));
  for (int n = 0; n <= t.steps(); ++n) {
    EXPECT_NEAR(t.states[static_cast<std::size_t>(n)][0], std::pow(1.0 + t.dt, -n), 1e-12);
  }
}

TEST(RotheRun, ScalarObstacleClampsNegativeLoad) {
  DenseMatrix one = DenseMatrix::Identity(1, 1);
  const Problem p{DiscreteGelfand(to_sparse(one), to_sparse(one)),
                  ConvexFunctional::obstacle(Vector::Zero(1)), ConvectionOperator::zero(1), {}};
  const Trajectory t = rothe_steps(p, scalar_config(0.0, -1.0, 0.1, 1.0), 3);
  for (const Vector& u : t.states) EXPECT_EQ(u[0], 0.0);
}

TEST(RotheRun, UnconstrainedStepIsLinearSolve) {
  ProblemSpec spec;
  spec.resolution = 12;
  spec.obstacle_level = -kInfinity;
  const Problem p = build(spec);
  RotheConfig c;
  c.dt = 0.01;
  c.T = 0.05;
  c.u0 = Vector::LinSpaced(12, 0.0, 1.0);
  c.load = Load::separable(Vector::Ones(12), TemporalProfile::sine(1.0, 3.0));
  c.solver.tol = 1e-14;
  const Trajectory t = rothe_steps(p, c, 5);
  const DenseMatrix M(p.gelfand.mass());
  const DenseMatrix L = M / c.dt + DenseMatrix(p.gelfand.stiffness());
  for (int n = 1; n <= 5; ++n) {
    const Vector expected =
        L.lu().solve(M * (average_load(c.load, n, c.dt) + t.states[n - 1] / c.dt));
    EXPECT_LE((t.states[static_cast<std::size_t>(n)] - expected).norm(), 1e-10);
  }
}

TEST(RotheRun, EveryStepPassesViCertificate) {
  const Preset s = preset("obstacle_smoke_1d");
  const Problem p = build(s.spec);
  const Trajectory t = rothe_run(p, s.config);
  ASSERT_EQ(t.steps(), 20);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= t.steps(); ++n) {
    const Vector& un = t.states[static_cast<std::size_t>(n)];
    const OseenData d{p.gelfand, p.phi, p.convection, 1.0 / t.dt,
                      t.states[static_cast<std::size_t>(n - 1)],
                      t.loads[static_cast<std::size_t>(n)] +
                          t.states[static_cast<std::size_t>(n - 1)] / t.dt};
    EXPECT_LE(t.records[static_cast<std::size_t>(n)].residual, s.config.solver.tol);
    EXPECT_TRUE(p.phi.feasible(un));
    for (int k = 0; k < 20; ++k) {
      Vector v(p.dim());
      for (int i = 0; i < p.dim(); ++i) v[i] = u(rng);
      EXPECT_GE(vi_gap(d, un, v), -1e-9 * std::max(1.0, std::abs(d.lambda) * v.norm()));
    }
  }
}

TEST(RotheRun, StepsMatchEnumerationOracle) {
  // The smoke data on 13 nodes keeps every step inside the oracle's range.
  Preset s = preset("obstacle_smoke_1d");
  s.spec.resolution = 13;
  const Problem p = build(s.spec);
  const DenseMatrix xy = node_coordinates(s.spec);
  RotheConfig c = s.config;
  c.u0 = Vector(13);
  Vector f(13);
  for (int i = 0; i < 13; ++i) {
    c.u0[i] = std::max(0.0, std::sin(2.0 * std::numbers::pi * xy(i, 0)));
    f[i] = -8.0 * std::sin(std::numbers::pi * xy(i, 0));
  }
  c.load = Load::constant(f);
  c.dt = 1e-3;
  c.solver.tol = 1e-13;
  const Trajectory t = rothe_steps(p, c, 5);
  for (int n = 1; n <= 5; ++n) {
    const Vector& prev = t.states[static_cast<std::size_t>(n - 1)];
    const OseenData d{p.gelfand, p.phi, p.convection, 1.0 / c.dt, prev,
                      t.loads[static_cast<std::size_t>(n)] + prev / c.dt};
    EXPECT_LE(p.gelfand.h_norm(brute_force_vi(d) - t.states[static_cast<std::size_t>(n)]), 1e-8)
        << "step " << n;
  }
}

TEST(RotheRun, HorizonQuantitiesAreDeterministic) {
  const Preset s = preset("friction_smoke");
  const Problem p = build(s.spec);
  const Trajectory a = rothe_run(p, s.config);
  const Trajectory b = rothe_run(p, s.config);
  EXPECT_EQ(a.T_star, b.T_star);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.dt_max, b.dt_max);
  for (std::size_t n = 0; n < a.states.size(); ++n) EXPECT_EQ(a.states[n], b.states[n]);
}

TEST(RotheRun, AdmissibilityIsEnforcedOnRequest) {
  const Preset s = preset("linear_scalar");
  Problem p = build(s.spec);
  p.ledger.C_H1 = {50.0};
  RotheConfig c = s.config;
  c.enforce_admissibility = true;
  EXPECT_THROW((void)rothe_run(p, c), ContractError);
}

TEST(RotheRun, InfeasibleInitialDatumIsRejected) {
  const Preset s = preset("obstacle_smoke_1d");
  RotheConfig c = s.config;
  c.u0 = -Vector::Ones(c.u0.size());
  EXPECT_THROW((void)rothe_run(build(s.spec), c), ContractError);
}

TEST(RotheRun, FinalBoundHoldsWithEstimatedConstants) {
  const Preset s = preset("obstacle_converge_1d");
  Problem p = build(s.spec);
  p.ledger = estimate_constants(p, 100, 4);
  const Trajectory t = rothe_run(p, s.config);
  ASSERT_LE(s.config.dt, t.dt_max);
  for (double slack : t.bound_slack) EXPECT_GE(slack, 0.0);
}

class InterpolantFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    traj_ = rothe_steps(scalar_problem(), scalar_config(1.0, 0.0, 0.25, 1.0), 4);
  }
  Trajectory traj_;
};

TEST_F(InterpolantFixture, KnotValuesAndDefinitions) {
  const double dt = traj_.dt;
  const auto& u = traj_.states;
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(interpolant_eval(traj_, InterpolantKind::kPl, n * dt)[0], u[n][0]);
  }
  for (int n = 1; n <= 4; ++n) {
    const double t = (n - 0.5) * dt;
    EXPECT_NEAR(interpolant_eval(traj_, InterpolantKind::kPcRight, t)[0] -
                    interpolant_eval(traj_, InterpolantKind::kPcLeft, t)[0],
                u[n][0] - u[n - 1][0], 1e-15);
  }
  EXPECT_EQ(interpolant_eval(traj_, InterpolantKind::kPlShifted, 0.5 * dt)[0], u[1][0]);
  EXPECT_NEAR(interpolant_eval(traj_, InterpolantKind::kPl, 0.5 * dt)[0],
              0.5 * (u[0][0] + u[1][0]), 1e-15);
  EXPECT_THROW((void)interpolant_eval(traj_, InterpolantKind::kPl, 1.5), ContractError);
  EXPECT_THROW((void)interpolant_eval(traj_, InterpolantKind::kPl, -0.1), ContractError);
}

TEST_F(InterpolantFixture, DistanceIdentities) {
  const Problem p = scalar_problem();
  EXPECT_EQ(traj_distance_L2V(p, traj_, traj_, InterpolantKind::kPl), 0.0);
  double sum = 0.0;
  for (int n = 1; n <= 4; ++n) sum += std::pow(traj_.states[n][0] - traj_.states[n - 1][0], 2);
  EXPECT_NEAR(traj_distance_L2V(p, traj_, InterpolantKind::kPcRight, traj_, InterpolantKind::kPl),
              std::sqrt(traj_.dt / 3.0 * sum), 1e-14);
}

TEST(TrajDistance, ConstantTrajectoriesDifferByTheirVNorm) {
  const Problem p = scalar_problem();
  const Trajectory a = rothe_steps(p, scalar_config(0.3, 0.3, 0.25, 1.0), 4);
  const Trajectory b = rothe_steps(p, scalar_config(-0.2, -0.2, 0.125, 1.0), 8);
  EXPECT_NEAR(traj_distance_L2V(p, a, b, InterpolantKind::kPl), 0.5, 1e-14);
  const Problem wide = build(preset("obstacle_smoke_1d").spec);
  EXPECT_THROW((void)traj_distance_L2V(wide, a, b, InterpolantKind::kPl), ContractError);
}

TEST(ConvergenceStudy, ZeroDataHasZeroDistances) {
  const Problem p = scalar_problem();
  const ConvergenceReport r =
      convergence_study(p, scalar_config(0.0, 0.0, 0.1, 1.0), {0.1, 0.05, 0.025});
  for (double d : r.distances) EXPECT_EQ(d, 0.0);
}

TEST(ConvergenceStudy, LinearDecayIsFirstOrderAgainstExactSolution) {
  const Preset s = preset("linear_scalar");
  const ConvergenceReport r = convergence_study(
      build(s.spec), s.config, s.study_dts,
      [](double t) { return Vector::Constant(1, std::exp(-t)); });
  ASSERT_EQ(r.reference_orders.size(), s.study_dts.size() - 1);
  for (double o : r.reference_orders) EXPECT_NEAR(o, 1.0, 0.15);
  for (std::size_t k = 1; k < r.distances.size(); ++k) {
    EXPECT_LT(r.distances[k], r.distances[k - 1]);
  }
}

TEST(ConvergenceStudy, ObstacleDistancesDecrease) {
  const Preset s = preset("obstacle_converge_1d");
  const ConvergenceReport r = convergence_study(build(s.spec), s.config, s.study_dts);
  ASSERT_EQ(r.distances.size(), 3u);
  EXPECT_LT(r.distances[1], r.distances[0]);
  EXPECT_LT(r.distances[2], r.distances[1]);
  for (double o : r.orders) EXPECT_GE(o, 0.5);
}

TEST(ConvergenceStudy, RejectsMalformedStepLists) {
  const Problem p = scalar_problem();
  const RotheConfig c = scalar_config(1.0, 0.0, 0.1, 1.0);
  EXPECT_THROW((void)convergence_study(p, c, {0.1, 0.05}), ContractError);
  EXPECT_THROW((void)convergence_study(p, c, {0.1, 0.04, 0.02}), ContractError);
}

}  // namespace
}  // namespace rothevi
