#include "rothevi/gelfand.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace rothevi {

struct DiscreteGelfand::MassFactor {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

namespace {

bool is_diagonal(const SparseMatrix& m) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (it.row() != it.col() && it.value() != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

DiscreteGelfand::DiscreteGelfand(SparseMatrix mass, SparseMatrix stiffness)
    : mass_(std::move(mass)), stiffness_(std::move(stiffness)) {
  require(mass_.rows() == mass_.cols() && mass_.rows() > 0,
          "DiscreteGelfand: mass matrix must be square and non-empty");
  require_dim(stiffness_.rows(), mass_.rows(), "DiscreteGelfand stiffness");
  require_dim(stiffness_.cols(), mass_.rows(), "DiscreteGelfand stiffness");

  SparseMatrix mass_t = mass_.transpose();
  const double mass_scale = std::max(mass_.norm(), 1e-300);
  require((mass_ - mass_t).norm() <= 1e-12 * mass_scale,
          "DiscreteGelfand: mass matrix is not symmetric");

  SparseMatrix stiff_t = stiffness_.transpose();
  stiffness_sym_ = 0.5 * (stiffness_ + stiff_t);
  mass_.makeCompressed();
  stiffness_.makeCompressed();
  stiffness_sym_.makeCompressed();

  mass_diagonal_ = is_diagonal(mass_);
  if (mass_diagonal_) {
    mass_diag_ = mass_.diagonal();
    require(mass_diag_.minCoeff() > 0.0,
            "DiscreteGelfand: lumped mass must be positive");
  } else {
    auto factor = std::make_shared<MassFactor>();
    factor->ldlt.compute(Eigen::SparseMatrix<double>(mass_));
    require(factor->ldlt.info() == Eigen::Success &&
                factor->ldlt.vectorD().minCoeff() > 0.0,
            "DiscreteGelfand: mass matrix is not positive definite");
    factor_ = std::move(factor);
  }
}

Vector DiscreteGelfand::mass_solve(const Vector& b) const {
  require_dim(b.size(), dim(), "mass_solve");
  if (mass_diagonal_) return b.cwiseQuotient(mass_diag_);
  return factor_->ldlt.solve(b);
}

Vector DiscreteGelfand::operator_image(const Vector& v) const {
  require_dim(v.size(), dim(), "operator_image");
  return mass_solve(stiffness_ * v);
}

double DiscreteGelfand::h_inner(const Vector& a, const Vector& b) const {
  require_dim(a.size(), dim(), "h_inner");
  require_dim(b.size(), dim(), "h_inner");
  return a.dot(mass_ * b);
}

double DiscreteGelfand::h_norm(const Vector& v) const {
  return std::sqrt(std::max(0.0, h_inner(v, v)));
}

double DiscreteGelfand::v_norm(const Vector& v) const {
  require_dim(v.size(), dim(), "v_norm");
  return std::sqrt(std::max(0.0, v.dot(stiffness_sym_ * v)));
}

double DiscreteGelfand::dual_h_norm(const Vector& y) const {
  require_dim(y.size(), dim(), "dual_h_norm");
  return std::sqrt(std::max(0.0, y.dot(mass_solve(y))));
}

double DiscreteGelfand::w_norm(const Vector& v) const {
  const double image = dual_h_norm(stiffness_ * v);
  const double vn = v_norm(v);
  return std::sqrt(image * image + vn * vn);
}

NormTriple norm_triple(const DiscreteGelfand& g, const Vector& v) {
  require_dim(v.size(), g.dim(), "norm_triple");
  return {g.h_norm(v), g.v_norm(v), g.w_norm(v)};
}

SparseMatrix to_sparse(const DenseMatrix& m) {
  return m.sparseView();
}

}  // namespace rothevi
