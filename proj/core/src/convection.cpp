#include "rothevi/convection.hpp"

#include <algorithm>
#include <tuple>

namespace rothevi {

ConvectionOperator ConvectionOperator::zero(int dim) { return {dim, {}}; }

ConvectionOperator::ConvectionOperator(int dim,
                                       std::vector<ConvectionEntry> entries)
    : dim_(dim) {
  require(dim > 0, "ConvectionOperator: dim must be positive");
  for (const auto& e : entries) {
    require(e.row >= 0 && e.row < dim && e.col >= 0 && e.col < dim &&
                e.slot >= 0 && e.slot < dim,
            "ConvectionOperator: entry index out of range");
    if (e.coeff != 0.0) entries_.push_back(e);
  }
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.row, a.col, a.slot) < std::tie(b.row, b.col, b.slot);
  });
}

SparseMatrix ConvectionOperator::assemble(const Vector& w) const {
  require_dim(w.size(), dim_, "convection assemble");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries_.size());
  for (const auto& e : entries_) {
    const double value = e.coeff * w[e.slot];
    if (value != 0.0) triplets.emplace_back(e.row, e.col, value);
  }
  SparseMatrix n(dim_, dim_);
  n.setFromTriplets(triplets.begin(), triplets.end());
  return n;
}

Vector ConvectionOperator::apply(const Vector& w, const Vector& u) const {
  require_dim(w.size(), dim_, "convection_apply w");
  require_dim(u.size(), dim_, "convection_apply u");
  Vector out = Vector::Zero(dim_);
  for (const auto& e : entries_) out[e.row] += e.coeff * w[e.slot] * u[e.col];
  return out;
}

double ConvectionOperator::trilinear(const Vector& w, const Vector& u,
                                     const Vector& v) const {
  require_dim(v.size(), dim_, "convection trilinear v");
  return v.dot(apply(w, u));
}

Vector convection_apply(const ConvectionOperator& op, const Vector& w,
                        const Vector& u) {
  return op.apply(w, u);
}

}  // namespace rothevi
