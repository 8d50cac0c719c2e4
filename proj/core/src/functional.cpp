#include "rothevi/functional.hpp"

#include <algorithm>
#include <cmath>

namespace rothevi {

const char* to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::kZero:
      return "zero";
    case FunctionalKind::kObstacle:
      return "obstacle";
    case FunctionalKind::kFriction:
      return "friction";
  }
  return "unknown";
}

ConvexFunctional ConvexFunctional::zero(int dim) {
  require(dim > 0, "ConvexFunctional::zero: dim must be positive");
  return {FunctionalKind::kZero, Vector::Zero(dim)};
}

ConvexFunctional ConvexFunctional::obstacle(Vector lower_bounds) {
  require(lower_bounds.size() > 0, "ConvexFunctional::obstacle: empty bounds");
  for (double b : lower_bounds) {
    require(!std::isnan(b) && b != kInfinity,
            "ConvexFunctional::obstacle: bounds must be < +inf");
  }
  return {FunctionalKind::kObstacle, std::move(lower_bounds)};
}

ConvexFunctional ConvexFunctional::friction(Vector weights) {
  require(weights.size() > 0, "ConvexFunctional::friction: empty weights");
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0,
            "ConvexFunctional::friction: weights must be finite and >= 0");
  }
  return {FunctionalKind::kFriction, std::move(weights)};
}

double ConvexFunctional::eval(const Vector& v) const {
  require_dim(v.size(), dim(), "phi_eval");
  switch (kind_) {
    case FunctionalKind::kZero:
      return 0.0;
    case FunctionalKind::kObstacle:
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] >= data_[i])) return kInfinity;
      }
      return 0.0;
    case FunctionalKind::kFriction:
      return data_.dot(v.cwiseAbs());
  }
  return 0.0;
}

bool ConvexFunctional::feasible(const Vector& v) const {
  return eval(v) < kInfinity;
}

double ConvexFunctional::prox_node(int i, double q, double r) const {
  require(q > 0.0, "prox_phi_node: q must be positive");
  require(i >= 0 && i < dim(), "prox_phi_node: index out of range");
  switch (kind_) {
    case FunctionalKind::kZero:
      return -r / q;
    case FunctionalKind::kObstacle:
      return std::max(data_[i], -r / q);
    case FunctionalKind::kFriction: {
      const double shrunk = std::max(0.0, std::abs(r) - data_[i]);
      if (shrunk == 0.0) return 0.0;
      return (r > 0.0 ? -shrunk : shrunk) / q;
    }
  }
  return 0.0;
}

Vector ConvexFunctional::project(const Vector& v) const {
  require_dim(v.size(), dim(), "ConvexFunctional::project");
  if (kind_ != FunctionalKind::kObstacle) return v;
  return v.cwiseMax(data_);
}

Vector ConvexFunctional::subgradient(const Vector& u, double select,
                                     double scale) const {
  require_dim(u.size(), dim(), "ConvexFunctional::subgradient");
  require(feasible(u), "ConvexFunctional::subgradient: u outside domain");
  select = std::clamp(select, -1.0, 1.0);
  Vector xi = Vector::Zero(dim());
  switch (kind_) {
    case FunctionalKind::kZero:
      break;
    case FunctionalKind::kObstacle:
      for (int i = 0; i < dim(); ++i) {
        if (u[i] == data_[i]) xi[i] = -std::abs(select) * scale;
      }
      break;
    case FunctionalKind::kFriction:
      for (int i = 0; i < dim(); ++i) {
        if (u[i] > 0.0) {
          xi[i] = data_[i];
        } else if (u[i] < 0.0) {
          xi[i] = -data_[i];
        } else {
          xi[i] = select * data_[i];
        }
      }
      break;
  }
  return xi;
}

double phi_eval(const ConvexFunctional& phi, const Vector& v) {
  return phi.eval(v);
}

double prox_phi_node(const ConvexFunctional& phi, int i, double q, double r) {
  return phi.prox_node(i, q, r);
}

}  // namespace rothevi
