#include <Eigen/LU>

#include <cmath>
#include <vector>

#include "rothevi/oseen.hpp"

namespace rothevi {

namespace {

constexpr double kKktTol = 1e-10;

// Solves L_FF x_F = rhs_F for the free index set F, with all other entries of
// u already fixed. Returns false if the reduced matrix is singular.
bool solve_reduced(const DenseMatrix& L, const Vector& rhs,
                   const std::vector<int>& free, Vector& u) {
  const int k = static_cast<int>(free.size());
  if (k == 0) return true;
  std::vector<bool> is_free(static_cast<std::size_t>(L.cols()), false);
  for (int j : free) is_free[static_cast<std::size_t>(j)] = true;
  DenseMatrix sub(k, k);
  Vector b(k);
  for (int a = 0; a < k; ++a) {
    double fixed = 0.0;
    for (int j = 0; j < L.cols(); ++j) {
      if (!is_free[static_cast<std::size_t>(j)]) fixed += L(free[a], j) * u[j];
    }
    b[a] = rhs[free[a]] - fixed;
    for (int c = 0; c < k; ++c) sub(a, c) = L(free[a], free[c]);
  }
  Eigen::FullPivLU<DenseMatrix> lu(sub);
  if (!lu.isInvertible()) return false;
  const Vector x = lu.solve(b);
  for (int a = 0; a < k; ++a) u[free[a]] = x[a];
  return true;
}

Vector brute_obstacle(const DenseMatrix& L, const Vector& load,
                      const Vector& lower, double scale) {
  const int n = static_cast<int>(L.rows());
  std::vector<int> bounded;
  std::vector<int> always_free;
  for (int i = 0; i < n; ++i) {
    (std::isfinite(lower[i]) ? bounded : always_free).push_back(i);
  }
  require(bounded.size() <= 14,
          "brute_force_vi: more than 14 constrained nodes");
  const double tol = kKktTol * scale;
  const unsigned long patterns = 1UL << bounded.size();
  for (unsigned long mask = 0; mask < patterns; ++mask) {
    Vector u = Vector::Zero(n);
    std::vector<int> free = always_free;
    for (std::size_t b = 0; b < bounded.size(); ++b) {
      if (mask & (1UL << b)) {
        u[bounded[b]] = lower[bounded[b]];
      } else {
        free.push_back(bounded[b]);
      }
    }
    if (!solve_reduced(L, load, free, u)) continue;
    const Vector grad = L * u - load;
    bool ok = true;
    for (std::size_t b = 0; b < bounded.size() && ok; ++b) {
      const int i = bounded[b];
      ok = (mask & (1UL << b)) ? grad[i] >= -tol : u[i] >= lower[i] - tol;
    }
    if (ok) return u.cwiseMax(lower);
  }
  throw SolverError("brute_force_vi: no active set passes the KKT checks");
}

Vector brute_friction(const DenseMatrix& L, const Vector& load,
                      const Vector& weights, double scale) {
  const int n = static_cast<int>(L.rows());
  std::vector<int> weighted;
  std::vector<int> smooth;
  for (int i = 0; i < n; ++i) {
    (weights[i] > 0.0 ? weighted : smooth).push_back(i);
  }
  require(weighted.size() <= 9, "brute_force_vi: more than 9 friction nodes");
  const double tol = kKktTol * scale;
  long patterns = 1;
  for (std::size_t b = 0; b < weighted.size(); ++b) patterns *= 3;

  // state 0: uᵢ = 0, 1: uᵢ > 0, 2: uᵢ < 0
  std::vector<int> state(weighted.size());
  for (long code = 0; code < patterns; ++code) {
    long c = code;
    for (auto& s : state) {
      s = static_cast<int>(c % 3);
      c /= 3;
    }
    Vector u = Vector::Zero(n);
    Vector rhs = load;
    std::vector<int> free = smooth;
    for (std::size_t b = 0; b < weighted.size(); ++b) {
      const int i = weighted[b];
      if (state[b] == 1) {
        rhs[i] -= weights[i];
        free.push_back(i);
      } else if (state[b] == 2) {
        rhs[i] += weights[i];
        free.push_back(i);
      }
    }
    if (!solve_reduced(L, rhs, free, u)) continue;
    const Vector grad = L * u - load;
    bool ok = true;
    for (std::size_t b = 0; b < weighted.size() && ok; ++b) {
      const int i = weighted[b];
      switch (state[b]) {
        case 0:
          ok = std::abs(grad[i]) <= weights[i] + tol;
          break;
        case 1:
          ok = u[i] >= -tol;
          break;
        default:
          ok = u[i] <= tol;
          break;
      }
    }
    if (ok) return u;
  }
  throw SolverError("brute_force_vi: no sign pattern passes the KKT checks");
}

}  // namespace

Vector brute_force_vi(const OseenData& data) {
  const int n = data.gelfand.dim();
  require(n <= 64, "brute_force_vi: dimension too large for enumeration");
  require_dim(data.w.size(), n, "brute_force_vi w");
  require_dim(data.rhs.size(), n, "brute_force_vi rhs");
  require(data.lambda >= 0.0, "brute_force_vi: lambda must be >= 0");
  const DenseMatrix L = DenseMatrix(
      assemble_oseen(data.gelfand, data.convection, data.lambda, data.w));
  const Vector load = data.gelfand.mass() * data.rhs;
  const double scale = std::max(
      {1.0, load.lpNorm<Eigen::Infinity>(), L.lpNorm<Eigen::Infinity>()});

  switch (data.phi.kind()) {
    case FunctionalKind::kZero: {
      Eigen::FullPivLU<DenseMatrix> lu(L);
      if (!lu.isInvertible()) {
        throw SolverError("brute_force_vi: singular system");
      }
      return lu.solve(load);
    }
    case FunctionalKind::kObstacle:
      return brute_obstacle(L, load, data.phi.data(), scale);
    case FunctionalKind::kFriction:
      return brute_friction(L, load, data.phi.data(), scale);
  }
  return Vector::Zero(n);
}

}  // namespace rothevi
