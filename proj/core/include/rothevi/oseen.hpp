#pragma once

#include <optional>
#include <vector>

#include "rothevi/convection.hpp"
#include "rothevi/functional.hpp"
#include "rothevi/gelfand.hpp"

namespace rothevi {

/// Data of one stationary Oseen-type VI
///   (v-u)ᵀ(L u - M·rhs) + φ(v) - φ(u) ≥ 0  ∀v,   L = λM + S + N(w).
struct OseenData {
  const DiscreteGelfand& gelfand;
  const ConvexFunctional& phi;
  const ConvectionOperator& convection;
  double lambda = 0.0;
  Vector w;
  Vector rhs;
};

enum class SweepOrder { kAscendingFirst, kDescendingFirst };

struct SolverOptions {
  double tol = 1e-10;
  /// Sweep limit; 0 selects 50·dim.
  int max_iter = 0;
  /// Warm start; projected to feasibility before the first sweep.
  std::optional<Vector> initial;
  SweepOrder order = SweepOrder::kAscendingFirst;
  bool record_history = false;
};

struct StationarySolve {
  Vector u;
  int iterations = 0;
  double residual = 0.0;
  double lambda = 0.0;
  bool certified = false;
  /// Natural-map residual after each sweep (when requested).
  std::vector<double> history;
};

/// L = λM + S + N(w).
SparseMatrix assemble_oseen(const DiscreteGelfand& g,
                            const ConvectionOperator& op, double lambda,
                            const Vector& w);

/// Proximal Gauss–Seidel with symmetric sweeps; each coordinate update is the
/// exact scalar minimizer. Stops once the natural-map residual is ≤ tol.
StationarySolve solve_stationary_vi(const OseenData& data,
                                    const SolverOptions& options = {});

/// ‖u - p‖_H with pᵢ = prox(i, Lᵢᵢ, (Lu - M·rhs)ᵢ - Lᵢᵢuᵢ).
double vi_residual(const OseenData& data, const Vector& u);

/// Left-hand side of the discrete VI at a test point v (≥ 0 iff v does not
/// witness a violation).
double vi_gap(const OseenData& data, const Vector& u, const Vector& v);

/// Exhaustive active-set (obstacle) or sign-pattern (friction) enumeration
/// with exact KKT checks. Desk-scale oracle: obstacle dim ≤ 14, friction
/// dim ≤ 9.
Vector brute_force_vi(const OseenData& data);

}  // namespace rothevi
