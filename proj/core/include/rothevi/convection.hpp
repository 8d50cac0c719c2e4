#pragma once

#include <vector>

#include "rothevi/types.hpp"

namespace rothevi {

/// One coefficient of the third-order tensor T with N(w)_{row,col} =
/// Σ_slot T_{row,col,slot} w_slot.
struct ConvectionEntry {
  int row = 0;
  int col = 0;
  int slot = 0;
  double coeff = 0.0;
};

/// Discrete Navier–Stokes type operator B.
///
/// Stored as a sparse tensor, so N(w) is linear in w by construction and the
/// trilinear form is ⟨B(w,u), v⟩ = vᵀ N(w) u.
class ConvectionOperator {
 public:
  static ConvectionOperator zero(int dim);
  ConvectionOperator(int dim, std::vector<ConvectionEntry> entries);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] bool is_zero() const { return entries_.empty(); }
  [[nodiscard]] const std::vector<ConvectionEntry>& entries() const {
    return entries_;
  }

  [[nodiscard]] SparseMatrix assemble(const Vector& w) const;
  [[nodiscard]] Vector apply(const Vector& w, const Vector& u) const;
  [[nodiscard]] double trilinear(const Vector& w, const Vector& u,
                                 const Vector& v) const;

 private:
  int dim_ = 0;
  std::vector<ConvectionEntry> entries_;
};

Vector convection_apply(const ConvectionOperator& op, const Vector& w,
                        const Vector& u);

}  // namespace rothevi
