#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rothevi/rothe.hpp"

namespace rothevi {

/// Outcome of one executable check. Slacks are normalized per entry so that
/// a single tolerance applies: pass iff worst_slack >= -tolerance.
struct CheckReport {
  std::string name;
  std::vector<double> slacks;
  double worst_slack = kInfinity;
  double tolerance = 0.0;
  bool pass = true;
  std::map<std::string, double> context;
  std::vector<std::string> notes;

  /// Recomputes worst_slack and pass from slacks and tolerance.
  void finalize();
};

/// Per-step energy inequality obtained by testing the step VI with
/// v = uⁿ⁻¹. Constant-free; slack_n = (RHS - LHS) / max(1, term scale).
CheckReport step_energy_check(const Problem& problem, const Trajectory& traj,
                              double tolerance = 1e-9);

/// ‖δⁿ‖²_H + (‖uⁿ‖²_V - ‖uⁿ⁻¹‖²_V + ‖uⁿ - uⁿ⁻¹‖²_V)/Δt + 2(φ(uⁿ) - φ(uⁿ⁻¹))/Δt
///   ≤ M (‖uⁿ⁻¹‖_V^{2θ2} ‖uⁿ‖²_V + ‖fⁿ‖²_H + 1)
/// with M from the ledger.
CheckReport apriori_check(const Problem& problem, const Trajectory& traj,
                          double tolerance = 1e-9);

/// ‖uⁿ‖²_V ≤ 2^{1+1/θ2}(E0 + β) for every step of a rothe_run trajectory.
CheckReport final_bound_check(const Problem& problem, const Trajectory& traj,
                              double tolerance = 1e-9);

struct SequenceBound {
  int n_max = 0;
  double bound = 0.0;
};

/// Largest n with 4 M x0^θ nΔt ≤ 1/θ and 4 M x0^θ Σ_{m≤n} y_m Δt ≤ β^{θ+1},
/// and the guaranteed bound 2^{1/θ} x0. n ranges over 0..y.size().
SequenceBound difference_sequence_bound(double x0, double theta, double Mc,
                                        double dt, const std::vector<double>& y,
                                        double beta);

/// A sequence pair (x, y) obeying
///   (x_n - x_{n-1})/Δt ≤ M (x_{n-1}^θ x_n + y_n),  x_n ≥ β.
struct SyntheticSequence {
  double theta = 1.0;
  double Mc = 1.0;
  double dt = 0.1;
  double beta = 1.0;
  std::vector<double> x;  ///< x_0 … x_K
  std::vector<double> y;  ///< y_1 … y_K
};

enum class SequenceProfile {
  kRandom,       ///< random growth fraction, random positive y
  kMaxGrowth,    ///< every step saturates the recurrence
  kFrontLoaded,  ///< saturated growth, y concentrated on the first steps
};

/// Draws one sequence from a seeded generator. Δt is sized so the first
/// condition admits 5..60 steps; the loads consume 20..100% of the second.
SyntheticSequence make_sequence(std::uint64_t seed, SequenceProfile profile);

/// Slack of x_n ≤ bound over n = 1..n_max (normalized by the bound), one
/// entry per sequence. Used to state how often the guarantee holds.
CheckReport difference_sequence_study(
    const std::vector<SyntheticSequence>& sequences,
    bool theta_on_load_term = false);

/// mean φ(samples) - φ(mean of samples); pass iff ≥ -1e-12·scale.
CheckReport jensen_check(const ConvexFunctional& phi,
                         const std::vector<Vector>& samples);

/// ‖uⁿ - Uⁿ‖_H / δ for n = 0..N, where U starts from the feasible
/// projection of u⁰ + δ·e (e = normalized ones) and both runs take `steps`
/// steps. The realized δ after projection is returned alongside.
struct PerturbationRun {
  double delta = 0.0;
  std::vector<double> ratios;
};
PerturbationRun perturbation_ratios(const Problem& problem,
                                    const RotheConfig& config, double delta,
                                    int steps);

/// r(δ) = max_{n≥1} ratio for δ and δ/2; pass iff r(δ/2) ≤ 1.25 r(δ).
CheckReport gronwall_experiment(const Problem& problem,
                                const RotheConfig& config, double delta);

/// L(Δt) = max_n ‖δⁿ‖_H per Δt; pass iff L(Δt_{k+1}) ≤ 1.2 L(Δt_k) up to a
/// relative noise floor of 1e-6·max L.
CheckReport lipschitz_diagnostic(const Problem& problem,
                                 const RotheConfig& config,
                                 const std::vector<double>& dt_list);

/// Empirical ledger: ratio maxima over seeded random samples followed by
/// coordinate hill climbing; (C_reg, C_phi2) from stationary λ = 0 solves
/// with an affine covering fit minimizing the total slack.
ConstantsLedger estimate_constants(const Problem& problem, int n_samples,
                                   std::uint64_t seed);

/// One-sided affine covering fit y ≤ a x + b, b ≥ 0, minimizing
/// Σ (a xᵢ + b - yᵢ). Returns (a, b).
std::pair<double, double> covering_fit(const std::vector<double>& x,
                                       const std::vector<double>& y);

}  // namespace rothevi
