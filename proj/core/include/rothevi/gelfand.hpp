#pragma once

#include <memory>

#include "rothevi/types.hpp"

namespace rothevi {

struct NormTriple {
  double h = 0.0;
  double v = 0.0;
  double w = 0.0;
};

/// Discrete Gelfand triple V ⊂ H ⊂ V'.
///
/// The mass matrix carries the H inner product, the stiffness matrix the
/// bilinear form a(·,·). The V norm is sqrt(vᵀ S_sym v) and the W norm is
///   ‖v‖_W² = ‖M⁻¹Sv‖_H² + ‖v‖_V²,
/// i.e. the H norm of the discrete operator image plus the V norm.
///
/// Instances are immutable; copies share the mass factorization.
class DiscreteGelfand {
 public:
  DiscreteGelfand(SparseMatrix mass, SparseMatrix stiffness);

  [[nodiscard]] int dim() const { return static_cast<int>(mass_.rows()); }
  [[nodiscard]] const SparseMatrix& mass() const { return mass_; }
  [[nodiscard]] const SparseMatrix& stiffness() const { return stiffness_; }
  [[nodiscard]] const SparseMatrix& stiffness_sym() const {
    return stiffness_sym_;
  }
  [[nodiscard]] bool mass_is_diagonal() const { return mass_diagonal_; }

  /// Solves M x = b.
  [[nodiscard]] Vector mass_solve(const Vector& b) const;
  /// Discrete operator image A v = M⁻¹ S v, an element of H.
  [[nodiscard]] Vector operator_image(const Vector& v) const;

  [[nodiscard]] double h_inner(const Vector& a, const Vector& b) const;
  [[nodiscard]] double h_norm(const Vector& v) const;
  [[nodiscard]] double v_norm(const Vector& v) const;
  [[nodiscard]] double w_norm(const Vector& v) const;
  /// H norm of the element M⁻¹ y represented by a dual (load) vector y.
  [[nodiscard]] double dual_h_norm(const Vector& y) const;

 private:
  struct MassFactor;

  SparseMatrix mass_;
  SparseMatrix stiffness_;
  SparseMatrix stiffness_sym_;
  bool mass_diagonal_ = false;
  Vector mass_diag_;
  std::shared_ptr<const MassFactor> factor_;
};

NormTriple norm_triple(const DiscreteGelfand& g, const Vector& v);

SparseMatrix to_sparse(const DenseMatrix& m);

}  // namespace rothevi
