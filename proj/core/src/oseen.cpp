#include "rothevi/oseen.hpp"

#include <cmath>
#include <string>

namespace rothevi {

namespace {

void check_data(const OseenData& d) {
  const int n = d.gelfand.dim();
  require_dim(d.phi.dim(), n, "Oseen functional");
  require_dim(d.convection.dim(), n, "Oseen convection");
  require_dim(d.w.size(), n, "Oseen w");
  require_dim(d.rhs.size(), n, "Oseen rhs");
  require(d.lambda >= 0.0 && std::isfinite(d.lambda),
          "Oseen VI: lambda must be finite and >= 0");
}

// Natural-map residual given L, the load b = M·rhs and diag(L).
double natural_map_residual(const DiscreteGelfand& g,
                            const ConvexFunctional& phi, const SparseMatrix& L,
                            const Vector& diag, const Vector& load,
                            const Vector& u) {
  const Vector grad = L * u - load;
  Vector gap(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = grad[i] - diag[i] * u[i];
    gap[i] = u[i] - phi.prox_node(static_cast<int>(i), diag[i], r);
  }
  return g.h_norm(gap);
}

Vector positive_diagonal(const SparseMatrix& L) {
  Vector diag = L.diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0)) {
      throw SolverError("diagonal not positive at row " + std::to_string(i) +
                        "; refine mesh or increase lambda");
    }
  }
  return diag;
}

}  // namespace

SparseMatrix assemble_oseen(const DiscreteGelfand& g,
                            const ConvectionOperator& op, double lambda,
                            const Vector& w) {
  SparseMatrix L = g.stiffness();
  if (lambda != 0.0) L += lambda * g.mass();
  if (!op.is_zero()) L += op.assemble(w);
  L.makeCompressed();
  return L;
}

StationarySolve solve_stationary_vi(const OseenData& data,
                                    const SolverOptions& options) {
  check_data(data);
  require(options.tol > 0.0, "solve_stationary_vi: tol must be positive");
  const int n = data.gelfand.dim();
  const int max_iter = options.max_iter > 0 ? options.max_iter : 50 * n;

  const SparseMatrix L =
      assemble_oseen(data.gelfand, data.convection, data.lambda, data.w);
  const Vector diag = positive_diagonal(L);
  const Vector load = data.gelfand.mass() * data.rhs;
  const ConvexFunctional& phi = data.phi;

  Vector u(n);
  if (options.initial) {
    require_dim(options.initial->size(), n, "solve_stationary_vi initial");
    u = phi.project(*options.initial);
  } else {
    for (int i = 0; i < n; ++i) u[i] = phi.prox_node(i, diag[i], -load[i]);
  }

  auto relax = [&](int i) {
    double lu = 0.0;
    for (SparseMatrix::InnerIterator it(L, i); it; ++it) {
      lu += it.value() * u[it.col()];
    }
    const double r = lu - load[i] - diag[i] * u[i];
    u[i] = phi.prox_node(i, diag[i], r);
  };
  auto forward = [&] {
    for (int i = 0; i < n; ++i) relax(i);
  };
  auto backward = [&] {
    for (int i = n - 1; i >= 0; --i) relax(i);
  };

  StationarySolve out;
  out.lambda = data.lambda;
  out.residual = natural_map_residual(data.gelfand, phi, L, diag, load, u);
  if (options.record_history) out.history.push_back(out.residual);
  while (out.residual > options.tol && out.iterations < max_iter) {
    if (options.order == SweepOrder::kAscendingFirst) {
      forward();
      backward();
    } else {
      backward();
      forward();
    }
    ++out.iterations;
    out.residual = natural_map_residual(data.gelfand, phi, L, diag, load, u);
    if (options.record_history) out.history.push_back(out.residual);
  }
  out.certified = out.residual <= options.tol;
  out.u = std::move(u);
  return out;
}

double vi_residual(const OseenData& data, const Vector& u) {
  check_data(data);
  require_dim(u.size(), data.gelfand.dim(), "vi_residual u");
  const SparseMatrix L =
      assemble_oseen(data.gelfand, data.convection, data.lambda, data.w);
  const Vector diag = positive_diagonal(L);
  return natural_map_residual(data.gelfand, data.phi, L, diag,
                              data.gelfand.mass() * data.rhs, u);
}

double vi_gap(const OseenData& data, const Vector& u, const Vector& v) {
  check_data(data);
  const SparseMatrix L =
      assemble_oseen(data.gelfand, data.convection, data.lambda, data.w);
  const Vector grad = L * u - data.gelfand.mass() * data.rhs;
  return (v - u).dot(grad) + data.phi.eval(v) - data.phi.eval(u);
}

}  // namespace rothevi
