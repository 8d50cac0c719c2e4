#pragma once

#include <limits>

#include "rothevi/types.hpp"

namespace rothevi {

enum class FunctionalKind { kZero, kObstacle, kFriction };

const char* to_string(FunctionalKind kind);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Separable convex, proper, lower-semicontinuous functional φ.
///
///   zero      φ ≡ 0
///   obstacle  indicator of {v ≥ lower} (entries of lower may be -inf)
///   friction  Σ weightᵢ |vᵢ|
///
/// All three are nonnegative, so the lower-bound constant C_φ1 is 0.
class ConvexFunctional {
 public:
  static ConvexFunctional zero(int dim);
  static ConvexFunctional obstacle(Vector lower_bounds);
  static ConvexFunctional friction(Vector weights);

  [[nodiscard]] FunctionalKind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return static_cast<int>(data_.size()); }
  /// Lower bounds (obstacle) or weights (friction); zeros for the zero kind.
  [[nodiscard]] const Vector& data() const { return data_; }

  /// Strict evaluation: any violated bound yields +inf.
  [[nodiscard]] double eval(const Vector& v) const;
  [[nodiscard]] bool feasible(const Vector& v) const;

  /// argmin_x ½ q x² + r x + φᵢ(x).
  [[nodiscard]] double prox_node(int i, double q, double r) const;

  /// Nearest point of the effective domain (componentwise clamp).
  [[nodiscard]] Vector project(const Vector& v) const;

  /// One member of the Euclidean subdifferential ∂φ(u), i.e. ξ with
  /// φ(v) - φ(u) ≥ ξᵀ(v - u). At kinks the member is picked by
  /// select ∈ [-1, 1]: friction takes select·weight at uᵢ = 0, obstacle
  /// takes -|select|·scale on active nodes.
  [[nodiscard]] Vector subgradient(const Vector& u, double select = 0.0,
                                   double scale = 1.0) const;

 private:
  ConvexFunctional(FunctionalKind kind, Vector data)
      : kind_(kind), data_(std::move(data)) {}

  FunctionalKind kind_;
  Vector data_;
};

double phi_eval(const ConvexFunctional& phi, const Vector& v);
double prox_phi_node(const ConvexFunctional& phi, int i, double q, double r);

}  // namespace rothevi
