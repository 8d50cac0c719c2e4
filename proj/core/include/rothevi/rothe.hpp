#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rothevi/constants.hpp"
#include "rothevi/load.hpp"
#include "rothevi/oseen.hpp"

namespace rothevi {

/// Spatially discrete problem: the Gelfand triple, φ, B and the constants
/// used for the horizon and step-size bounds.
struct Problem {
  DiscreteGelfand gelfand;
  ConvexFunctional phi;
  ConvectionOperator convection;
  ConstantsLedger ledger;

  [[nodiscard]] int dim() const { return gelfand.dim(); }
  void validate() const;
};

struct RotheConfig {
  double dt = 0.01;
  double T = 1.0;
  Vector u0;
  Load load = Load::constant(Vector::Zero(1));
  bool enforce_admissibility = false;
  SolverOptions solver;
};

/// Per-step record; entry 0 describes the initial datum.
struct StepRecord {
  double norm_h = 0.0;
  double norm_v = 0.0;
  double norm_w = 0.0;
  double phi = 0.0;
  double delta_h = 0.0;   ///< ‖(uⁿ - uⁿ⁻¹)/Δt‖_H
  double residual = 0.0;  ///< natural-map residual of the step solve
  int iterations = 0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<Vector> states;  ///< u⁰ … u^N
  std::vector<Vector> loads;   ///< f^n, index 0 holds f(0)
  std::vector<StepRecord> records;
  double E0 = 0.0;  ///< ‖u⁰‖_V² + 2φ(u⁰) + C_phi3/2
  double F = 0.0;   ///< ‖f‖²_{L²(0,T;H)} as used for β
  double beta = 0.0;
  double T_star = 0.0;
  double dt_max = 0.0;
  /// Per-step slack of ‖uⁿ‖_V² ≤ 2^{1+1/θ2}(E0 + β); negative = violation.
  std::vector<double> bound_slack;

  [[nodiscard]] int steps() const {
    return static_cast<int>(states.size()) - 1;
  }
  [[nodiscard]] double horizon() const { return steps() * dt; }
};

/// Smallest β ≥ 0 with β^{θ2+1} ≥ 4 M' (E0 + β)^{θ2} F (bisection); 0 when
/// M' = 0 or F = 0.
double compute_beta(double E0, double F, double theta2, double M_prime);

/// min{ [8 M' (E0 + β)^{θ2} θ2]^{-1}, T }; T when M' = 0.
double compute_T_star(double E0, double beta, double theta2, double M_prime,
                      double T);

/// 1 / (C_{θ1,1/4} 2^{θ1} (2^{1+1/θ2}(E0 + β))^{θ1} + 1/2).
double admissible_dt_bound(double E0, double beta,
                           const ConstantsLedger& ledger);

/// ‖u⁰‖_V² + 2φ(u⁰) + C_phi3/2.
double initial_energy(const Problem& problem, const Vector& u0);

/// max(Σₙ‖fⁿ‖²_H Δt, ∫₀ᵀ‖f‖²_H dt) over n = 1..⌈T/Δt⌉.
double load_energy(const Problem& problem, const Load& load, double dt,
                   double T);

/// Runs exactly `steps` steps of the semi-implicit scheme from u0 without
/// computing the horizon quantities.
Trajectory rothe_steps(const Problem& problem, const RotheConfig& config,
                       int steps);

/// Full run: computes β, T*, Δt_max, then N = ⌈T*/Δt⌉ steps.
Trajectory rothe_run(const Problem& problem, const RotheConfig& config);

enum class InterpolantKind { kPcRight, kPcLeft, kPl, kPlShifted };

const char* to_string(InterpolantKind kind);

Vector interpolant_eval(const Trajectory& traj, InterpolantKind kind,
                        double t);

/// L²(0, T_common; V) distance of two interpolants, integrated exactly on
/// the union of knots. T_common = min of the two T* values.
double traj_distance_L2V(const Problem& problem, const Trajectory& a,
                         InterpolantKind kind_a, const Trajectory& b,
                         InterpolantKind kind_b);
double traj_distance_L2V(const Problem& problem, const Trajectory& a,
                         const Trajectory& b, InterpolantKind kind);

/// L²(0, T_end; V) distance between an interpolant and a reference
/// function, Gauss–Legendre per knot interval.
double reference_distance_L2V(const Problem& problem, const Trajectory& traj,
                              InterpolantKind kind,
                              const std::function<Vector(double)>& reference,
                              double T_end);

struct ConvergenceReport {
  std::vector<double> dts;
  double T_common = 0.0;
  std::vector<double> distances;  ///< d_k between dt_k and dt_{k+1}
  std::vector<double> orders;     ///< log2(d_k / d_{k+1})
  /// Against a reference solution, when one was supplied.
  std::vector<double> reference_errors;
  std::vector<double> reference_orders;
  std::vector<Trajectory> runs;
};

ConvergenceReport convergence_study(
    const Problem& problem, const RotheConfig& config,
    const std::vector<double>& dt_list,
    const std::function<Vector(double)>& reference = {});

}  // namespace rothevi
