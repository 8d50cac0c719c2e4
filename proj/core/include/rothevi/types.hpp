#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace rothevi {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Raised when an argument violates an operation's precondition
/// (dimension mismatch, non-positive step, unknown name, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver its guarantee
/// (non-positive pivot, uncertified step, no KKT pattern found).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

inline void require_dim(Eigen::Index actual, Eigen::Index expected,
                        const char* what) {
  if (actual != expected) {
    throw ContractError(std::string(what) + ": dimension mismatch (got " +
                        std::to_string(actual) + ", expected " +
                        std::to_string(expected) + ")");
  }
}

}  // namespace rothevi
