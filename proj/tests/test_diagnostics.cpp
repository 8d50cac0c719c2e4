#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rothevi/rothevi.hpp"
#include "support/instances.hpp"

namespace rothevi {
namespace {

using testing::scalar_config;
using testing::scalar_problem;

std::vector<SyntheticSequence> sequences(SequenceProfile profile, int count) {
  std::vector<SyntheticSequence> out;
  for (int s = 0; s < count; ++s) out.push_back(make_sequence(static_cast<std::uint64_t>(s), profile));
  return out;
}

TEST(StepEnergy, ZeroDataHasZeroSlack) {
  const Trajectory t = rothe_steps(scalar_problem(), scalar_config(0.0, 0.0, 0.1, 1.0), 5);
  const CheckReport r = step_energy_check(scalar_problem(), t);
  EXPECT_TRUE(r.pass);
  for (double s : r.slacks) EXPECT_EQ(s, 0.0);
}

TEST(StepEnergy, ScalarStepIsTightUpToTheDissipationTerm) {
  // u¹ = 2/3 from u⁰ = 1 with Δt = 1/2: δ = -2/3 and
  // LHS = 4/9 + (4/9 - 1 + 1/9) = 0 = RHS, so the inequality is an equality.
  const Problem p = scalar_problem();
  const Trajectory t = rothe_steps(p, scalar_config(1.0, 0.0, 0.5, 1.0), 1);
  const double d = (2.0 / 3.0 - 1.0) / 0.5;
  const double lhs = d * d + (4.0 / 9.0 - 1.0 + 1.0 / 9.0) / (2.0 * 0.5);
  const CheckReport r = step_energy_check(p, t);
  EXPECT_NEAR(lhs, 0.0, 1e-15);
  EXPECT_NEAR(r.slacks[0], 0.0, 1e-15);
}

TEST(StepEnergy, HoldsOnEveryPresetRun) {
  for (const auto& name : preset_names()) {
    const Preset s = preset(name);
    const Problem p = build(s.spec);
    const CheckReport r = step_energy_check(p, rothe_run(p, s.config));
    EXPECT_TRUE(r.pass) << name << " worst " << r.worst_slack;
  }
}

TEST(Apriori, DissipationIdentityPassesForZeroM) {
  Problem p = scalar_problem();
  p.ledger.M_override = 0.0;
  const Trajectory t = rothe_steps(p, scalar_config(1.0, 0.0, 0.1, 1.0), 10);
  EXPECT_TRUE(apriori_check(p, t).pass);
}

TEST(Apriori, ZeroMOnForcedRunFails) {
  Problem p = scalar_problem();
  p.ledger.M_override = 0.0;
  const Trajectory t = rothe_steps(p, scalar_config(0.0, 1.0, 0.1, 1.0), 10);
  const CheckReport r = apriori_check(p, t);
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.worst_slack, 0.0);
}

TEST(Apriori, EstimatedConstantsCertifyTheirOwnRun) {
  for (const auto& name : {"obstacle_converge_1d", "friction_smoke", "obstacle_2d_small"}) {
    const Preset s = preset(name);
    Problem p = build(s.spec);
    p.ledger = estimate_constants(p, 100, 12);
    const Trajectory t = rothe_run(p, s.config);
    EXPECT_TRUE(apriori_check(p, t).pass) << name;
    EXPECT_TRUE(final_bound_check(p, t).pass) << name;
  }
}

TEST(DifferenceSequence, ClosedFormRange) {
  const SequenceBound b = difference_sequence_bound(1.0, 1.0, 1.0, 0.1, std::vector<double>(10, 0.0), 1.0);
  EXPECT_EQ(b.n_max, 2);
  EXPECT_EQ(b.bound, 2.0);
  const SequenceBound none = difference_sequence_bound(1.0, 1.0, 1.0, 0.1, {100.0, 0.0}, 1.0);
  EXPECT_EQ(none.n_max, 0);
}

TEST(DifferenceSequence, GeneratedSequencesObeyTheirRecurrence) {
  for (auto profile : {SequenceProfile::kRandom, SequenceProfile::kMaxGrowth,
                       SequenceProfile::kFrontLoaded}) {
    for (const auto& s : sequences(profile, 50)) {
      for (std::size_t n = 1; n < s.x.size(); ++n) {
        const double growth = (s.x[n] - s.x[n - 1]) / s.dt;
        const double cap = s.Mc * (std::pow(s.x[n - 1], s.theta) * s.x[n] + s.y[n - 1]);
        EXPECT_LE(growth, cap * (1.0 + 1e-12));
        EXPECT_GE(s.x[n], s.beta);
      }
    }
  }
}

TEST(DifferenceSequence, RandomSequencesStayBelowTheBound) {
  const CheckReport r = difference_sequence_study(sequences(SequenceProfile::kRandom, 500));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.context.at("violations"), 0.0);
}

TEST(DifferenceSequence, LoadConditionWithoutThetaAdmitsViolations) {
  // Saturated growth with the load spent up front reaches past 2^{1/θ}x0
  // inside the stated range; the range needs the factor θ on the load sum.
  const CheckReport r = difference_sequence_study(sequences(SequenceProfile::kFrontLoaded, 500));
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.context.at("violations"), 0.0);
}

TEST(DifferenceSequence, LoadConditionWithThetaHoldsOnEveryProfile) {
  for (auto profile : {SequenceProfile::kRandom, SequenceProfile::kMaxGrowth,
                       SequenceProfile::kFrontLoaded}) {
    const CheckReport r = difference_sequence_study(sequences(profile, 500), true);
    EXPECT_TRUE(r.pass) << static_cast<int>(profile);
    EXPECT_EQ(r.context.at("violations"), 0.0);
  }
}

TEST(Jensen, ClosedFormExamples) {
  const auto obs = ConvexFunctional::obstacle(Vector::Zero(2));
  const CheckReport a = jensen_check(obs, {Vector{{0.0, 1.0}}, Vector{{2.0, 0.5}}});
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.worst_slack, 0.0);
  const auto fr = ConvexFunctional::friction(Vector::Ones(1));
  const CheckReport b = jensen_check(fr, {Vector{{1.0}}, Vector{{-1.0}}});
  EXPECT_TRUE(b.pass);
  EXPECT_DOUBLE_EQ(b.worst_slack, 1.0);
  EXPECT_THROW((void)jensen_check(fr, {Vector{{1.0}}}), ContractError);
}

TEST(Jensen, RandomFrictionSampleSetsNeverViolate) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 7;
    Vector w(n);
    for (int i = 0; i < n; ++i) w[i] = std::abs(u(rng));
    std::vector<Vector> samples(2 + trial % 5, Vector(n));
    for (auto& s : samples) {
      for (int i = 0; i < n; ++i) s[i] = u(rng);
    }
    EXPECT_GE(jensen_check(ConvexFunctional::friction(w), samples).worst_slack, 0.0);
  }
}

TEST(Gronwall, ZeroPerturbationPassesWithNote) {
  const Preset s = preset("linear_scalar");
  const CheckReport r = gronwall_experiment(build(s.spec), s.config, 0.0);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Gronwall, LinearProblemContractsExactly) {
  const Preset s = preset("linear_scalar");
  const Problem p = build(s.spec);
  const PerturbationRun run = perturbation_ratios(p, s.config, 1e-3, 10);
  ASSERT_EQ(run.ratios.size(), 11u);
  for (std::size_t n = 0; n < run.ratios.size(); ++n) {
    EXPECT_NEAR(run.ratios[n], std::pow(1.0 + s.config.dt, -static_cast<double>(n)), 1e-12);
  }
  const CheckReport r = gronwall_experiment(p, s.config, 1e-3);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.context.at("r_delta"), 1.0 / (1.0 + s.config.dt), 1e-12);
}

TEST(Gronwall, ObstacleRunIsLinearInPerturbation) {
  const Preset s = preset("obstacle_smoke_1d");
  EXPECT_TRUE(gronwall_experiment(build(s.spec), s.config, 1e-3).pass);
}

TEST(Lipschitz, StationaryDatumHasNoTimeDerivative) {
  // u⁰ = f solves the scalar step for every Δt.
  const Problem p = scalar_problem();
  const CheckReport r =
      lipschitz_diagnostic(p, scalar_config(0.4, 0.4, 0.1, 1.0), {0.1, 0.05, 0.025});
  EXPECT_TRUE(r.pass);
  for (int k = 0; k < 3; ++k) EXPECT_LE(r.context.at("L_" + std::to_string(k)), 1e-14);
}

TEST(Lipschitz, LinearDecayIsBoundedUnderRefinement) {
  const Problem p = scalar_problem();
  const std::vector<double> dts{0.2, 0.1, 0.05, 0.025};
  const CheckReport r = lipschitz_diagnostic(p, scalar_config(1.0, 0.0, 0.2, 1.0), dts);
  EXPECT_TRUE(r.pass);
  for (std::size_t k = 0; k < dts.size(); ++k) {
    EXPECT_NEAR(r.context.at("L_" + std::to_string(k)), 1.0 / (1.0 + dts[k]), 1e-12);
  }
}

TEST(Lipschitz, CompatibleAndIncompatiblePresets) {
  const Preset good = preset("lipschitz_compatible");
  EXPECT_TRUE(lipschitz_diagnostic(build(good.spec), good.config, good.study_dts).pass);
  const Preset bad = preset("lipschitz_incompatible");
  const CheckReport r = lipschitz_diagnostic(build(bad.spec), bad.config, bad.study_dts);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.notes.empty());
}

TEST(EstimateConstants, NoConvectionGivesZeroConvectionConstants) {
  const Problem p = build(preset("linear_scalar").spec);
  const ConstantsLedger l = estimate_constants(p, 100, 1);
  EXPECT_EQ(l.C_B.value, 0.0);
  EXPECT_EQ(l.C_H1.value, 0.0);
  EXPECT_EQ(l.C_H3.value, 0.0);
  EXPECT_EQ(l.C_H4.value, 0.0);
  EXPECT_EQ(l.C_B.provenance, Provenance::kEstimated);
}

TEST(EstimateConstants, ScalarRegularityConstantIsSqrtTwo) {
  const ConstantsLedger l = estimate_constants(scalar_problem(), 100, 2);
  EXPECT_NEAR(l.C_reg.value, std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(l.C_phi2.value, 0.0, 1e-8);
}

TEST(EstimateConstants, SeededRunsAreBitIdentical) {
  const Problem p = build(preset("friction_smoke").spec);
  const auto a = estimate_constants(p, 100, 9).rows();
  const auto b = estimate_constants(p, 100, 9).rows();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].value, b[i].value) << a[i].name;
  EXPECT_THROW((void)estimate_constants(p, 99, 9), ContractError);
}

TEST(EstimateConstants, BoundednessCoversFreshSamples) {
  const Problem p = build(preset("obstacle_2d_small").spec);
  const ConstantsLedger l = estimate_constants(p, 200, 5);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z;
  const int n = p.dim();
  int covered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Vector a(n), b(n), c(n);
    for (int i = 0; i < n; ++i) {
      a[i] = z(rng);
      b[i] = z(rng);
      c[i] = z(rng);
    }
    const double lhs = std::abs(p.convection.trilinear(a, b, c));
    const double rhs = l.C_B.value * p.gelfand.v_norm(a) * p.gelfand.v_norm(b) *
                       p.gelfand.v_norm(c);
    if (lhs <= rhs * (1.0 + 1e-12)) ++covered;
  }
  // Hill climbing pushes the estimate to the sampled maximum; fresh draws
  // almost always fall under it.
  EXPECT_GE(covered, 195);
}

TEST(CoveringFit, TightAffineCover) {
  const auto [a, b] = covering_fit({0.0, 1.0, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0});
  EXPECT_NEAR(a, 1.0, 1e-12);
  EXPECT_NEAR(b, 1.0, 1e-12);
  const auto [a0, b0] = covering_fit({1.0, 2.0}, {2.0, 4.0});
  EXPECT_NEAR(a0, 2.0, 1e-12);
  EXPECT_NEAR(b0, 0.0, 1e-12);
}

}  // namespace
}  // namespace rothevi
