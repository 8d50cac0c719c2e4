#include "rothevi/problems.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rothevi {

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kObstacleCd1d:
      return "obstacle_cd_1d";
    case ProblemKind::kObstacleCd2d:
      return "obstacle_cd_2d";
    case ProblemKind::kFrictionNeumann1d:
      return "friction_neumann_1d";
    case ProblemKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  for (ProblemKind k : {ProblemKind::kObstacleCd1d, ProblemKind::kObstacleCd2d,
                        ProblemKind::kFrictionNeumann1d, ProblemKind::kExplicit}) {
    if (name == to_string(k)) return k;
  }
  throw ContractError("unknown problem kind '" + name +
                      "' (expected obstacle_cd_1d, obstacle_cd_2d, "
                      "friction_neumann_1d or explicit)");
}

void ProblemSpec::validate() const {
  if (kind == ProblemKind::kExplicit) {
    require(mass.rows() > 0 && mass.rows() == mass.cols(),
            "explicit problem: mass must be square and nonempty");
    require(stiffness.rows() == mass.rows() && stiffness.cols() == mass.cols(),
            "explicit problem: stiffness and mass differ in shape");
    require(functional == FunctionalKind::kZero ||
                functional_data.size() == mass.rows(),
            "explicit problem: functional data has the wrong length");
    ledger.validate();
    return;
  }
  require(resolution >= 3, "problem spec: resolution must be >= 3");
  require(diffusion > 0.0, "problem spec: diffusion must be positive");
  require(x_domain.hi > x_domain.lo, "problem spec: empty x domain");
  const std::size_t dims = kind == ProblemKind::kObstacleCd2d ? 2 : 1;
  require(convection.size() == dims,
          "problem spec: convection needs " + std::to_string(dims) +
              " component(s)");
  if (kind == ProblemKind::kObstacleCd2d) {
    require(y_domain.hi > y_domain.lo, "problem spec: empty y domain");
  }
  if (kind == ProblemKind::kFrictionNeumann1d) {
    require(friction_left >= 0.0 && friction_right >= 0.0,
            "problem spec: friction weights must be >= 0");
    require(reaction > 0.0, "problem spec: reaction must be positive");
  }
  ledger.validate();
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int n, const Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// One-sided difference c·w_row·(u_row - u_nb)·weight, upwind by the sign of
// c. Keeps N(w) linear in w; nb < 0 drops the eliminated boundary value.
void upwind(std::vector<ConvectionEntry>& out, int row, int nb, double c,
            double weight) {
  const double a = std::abs(c) * weight;
  if (a == 0.0) return;
  out.push_back({row, row, row, a});
  if (nb >= 0) out.push_back({row, nb, row, -a});
}

Problem build_obstacle_1d(const ProblemSpec& s) {
  const int n = s.resolution;
  const double h = (s.x_domain.hi - s.x_domain.lo) / (n + 1);
  Triplets mass;
  Triplets stiff;
  std::vector<ConvectionEntry> conv;
  const double c = s.convection[0];
  for (int i = 0; i < n; ++i) {
    mass.emplace_back(i, i, h);
    stiff.emplace_back(i, i, 2.0 * s.diffusion / h);
    if (i > 0) stiff.emplace_back(i, i - 1, -s.diffusion / h);
    if (i + 1 < n) stiff.emplace_back(i, i + 1, -s.diffusion / h);
    // Mass-weighted difference quotient: h · c wᵢ (uᵢ - u_nb)/h.
    const int nb = c > 0.0 ? i - 1 : (i + 1 < n ? i + 1 : -1);
    upwind(conv, i, nb, c, 1.0);
  }
  return Problem{DiscreteGelfand(from_triplets(n, mass), from_triplets(n, stiff)),
                 ConvexFunctional::obstacle(Vector::Constant(n, s.obstacle_level)),
                 ConvectionOperator(n, std::move(conv)), s.ledger};
}

Problem build_obstacle_2d(const ProblemSpec& s) {
  const int m = s.resolution;
  const int n = m * m;
  const double hx = (s.x_domain.hi - s.x_domain.lo) / (m + 1);
  const double hy = (s.y_domain.hi - s.y_domain.lo) / (m + 1);
  const double d = s.diffusion;
  // kron(Sx, My) + kron(Mx, Sy) with lumped 1D masses; x runs fastest.
  const double ax = d * hy / hx;
  const double ay = d * hx / hy;
  Triplets mass;
  Triplets stiff;
  std::vector<ConvectionEntry> conv;
  const double cx = s.convection[0];
  const double cy = s.convection[1];
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int k = j * m + i;
      mass.emplace_back(k, k, hx * hy);
      stiff.emplace_back(k, k, 2.0 * ax + 2.0 * ay);
      if (i > 0) stiff.emplace_back(k, k - 1, -ax);
      if (i + 1 < m) stiff.emplace_back(k, k + 1, -ax);
      if (j > 0) stiff.emplace_back(k, k - m, -ay);
      if (j + 1 < m) stiff.emplace_back(k, k + m, -ay);

      const int nbx = cx > 0.0 ? (i > 0 ? k - 1 : -1) : (i + 1 < m ? k + 1 : -1);
      const int nby = cy > 0.0 ? (j > 0 ? k - m : -1) : (j + 1 < m ? k + m : -1);
      upwind(conv, k, nbx, cx, hy);
      upwind(conv, k, nby, cy, hx);
    }
  }
  // Coincident (row, col, slot) entries are summed by the operator.
  return Problem{DiscreteGelfand(from_triplets(n, mass), from_triplets(n, stiff)),
                 ConvexFunctional::obstacle(Vector::Constant(n, s.obstacle_level)),
                 ConvectionOperator(n, std::move(conv)), s.ledger};
}

Problem build_friction_1d(const ProblemSpec& s) {
  const int n = s.resolution;
  const double h = (s.x_domain.hi - s.x_domain.lo) / (n - 1);
  const double d = s.diffusion;
  const double c = s.convection[0];
  Triplets mass;
  Triplets stiff;
  std::vector<ConvectionEntry> conv;
  for (int i = 0; i < n; ++i) {
    const bool boundary = i == 0 || i == n - 1;
    const double mi = boundary ? 0.5 * h : h;
    mass.emplace_back(i, i, mi);
    stiff.emplace_back(i, i, (boundary ? 1.0 : 2.0) * d / h + s.reaction * mi);
    if (i > 0) stiff.emplace_back(i, i - 1, -d / h);
    if (i + 1 < n) stiff.emplace_back(i, i + 1, -d / h);
    // The inflow node has no upwind neighbour and carries no convection.
    const int nb = c > 0.0 ? i - 1 : i + 1;
    if (nb >= 0 && nb < n) upwind(conv, i, nb, c, mi / h);
  }
  Vector weights = Vector::Zero(n);
  weights[0] = s.friction_left;
  weights[n - 1] = s.friction_right;
  return Problem{DiscreteGelfand(from_triplets(n, mass), from_triplets(n, stiff)),
                 ConvexFunctional::friction(std::move(weights)),
                 ConvectionOperator(n, std::move(conv)), s.ledger};
}

Problem build_explicit(const ProblemSpec& s) {
  const int n = static_cast<int>(s.mass.rows());
  ConvexFunctional phi = ConvexFunctional::zero(n);
  if (s.functional == FunctionalKind::kObstacle) {
    phi = ConvexFunctional::obstacle(s.functional_data);
  } else if (s.functional == FunctionalKind::kFriction) {
    phi = ConvexFunctional::friction(s.functional_data);
  }
  return Problem{DiscreteGelfand(to_sparse(s.mass), to_sparse(s.stiffness)),
                 std::move(phi), ConvectionOperator(n, s.convection_entries),
                 s.ledger};
}

}  // namespace

Problem build(const ProblemSpec& spec) {
  spec.validate();
  Problem p = [&] {
    switch (spec.kind) {
      case ProblemKind::kObstacleCd1d:
        return build_obstacle_1d(spec);
      case ProblemKind::kObstacleCd2d:
        return build_obstacle_2d(spec);
      case ProblemKind::kFrictionNeumann1d:
        return build_friction_1d(spec);
      case ProblemKind::kExplicit:
        break;
    }
    return build_explicit(spec);
  }();
  p.validate();
  return p;
}

DenseMatrix node_coordinates(const ProblemSpec& spec) {
  const Interval& X = spec.x_domain;
  const Interval& Y = spec.y_domain;
  const int m = spec.resolution;
  switch (spec.kind) {
    case ProblemKind::kObstacleCd1d: {
      DenseMatrix xy(m, 1);
      const double h = (X.hi - X.lo) / (m + 1);
      for (int i = 0; i < m; ++i) xy(i, 0) = X.lo + (i + 1) * h;
      return xy;
    }
    case ProblemKind::kFrictionNeumann1d: {
      DenseMatrix xy(m, 1);
      const double h = (X.hi - X.lo) / (m - 1);
      for (int i = 0; i < m; ++i) xy(i, 0) = X.lo + i * h;
      return xy;
    }
    case ProblemKind::kObstacleCd2d: {
      DenseMatrix xy(m * m, 2);
      const double hx = (X.hi - X.lo) / (m + 1);
      const double hy = (Y.hi - Y.lo) / (m + 1);
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
          xy(j * m + i, 0) = X.lo + (i + 1) * hx;
          xy(j * m + i, 1) = Y.lo + (j + 1) * hy;
        }
      }
      return xy;
    }
    case ProblemKind::kExplicit:
      break;
  }
  // Explicit problems have no geometry; use the unknown index.
  DenseMatrix xy(spec.mass.rows(), 1);
  for (Eigen::Index i = 0; i < xy.rows(); ++i) xy(i, 0) = static_cast<double>(i);
  return xy;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

constexpr double kPi = std::numbers::pi;

template <typename Fn>
Vector nodal(const DenseMatrix& xy, Fn&& fn) {
  Vector v(xy.rows());
  for (Eigen::Index i = 0; i < xy.rows(); ++i) {
    v[i] = xy.cols() == 1 ? fn(xy(i, 0), 0.0) : fn(xy(i, 0), xy(i, 1));
  }
  return v;
}

// Horizon for a datum with the load energy taken over [0, T] continuously.
double horizon_of(const Problem& p, const RotheConfig& c) {
  const double E0 = initial_energy(p, c.u0);
  double F = 0.0;
  if (c.load.kind() == Load::Kind::kConstant) {
    F = p.gelfand.h_inner(c.load.spatial(), c.load.spatial()) * c.T;
  } else {
    F = c.load.h_norm_sq_integral(p.gelfand, 0.0, c.T);
  }
  const double theta2 = p.ledger.theta2.value;
  const double beta = compute_beta(E0, F, theta2, p.ledger.M_prime());
  return compute_T_star(E0, beta, theta2, p.ledger.M_prime(), c.T);
}

std::vector<double> halvings(double first, int count) {
  std::vector<double> out{first};
  while (static_cast<int>(out.size()) < count) out.push_back(0.5 * out.back());
  return out;
}

Preset linear_scalar() {
  Preset p;
  p.name = "linear_scalar";
  p.spec.kind = ProblemKind::kExplicit;
  p.spec.mass = DenseMatrix::Identity(1, 1);
  p.spec.stiffness = DenseMatrix::Identity(1, 1);
  p.config.T = 1.0;
  p.config.u0 = Vector::Ones(1);
  p.config.load = Load::constant(Vector::Zero(1));
  const double T_star = horizon_of(build(p.spec), p.config);
  p.config.dt = T_star / 10.0;
  p.study_dts = halvings(T_star / 4.0, 4);
  return p;
}

Preset obstacle_smoke_1d() {
  Preset p;
  p.name = "obstacle_smoke_1d";
  p.spec.kind = ProblemKind::kObstacleCd1d;
  p.spec.resolution = 31;
  p.spec.convection = {1.0};
  const DenseMatrix xy = node_coordinates(p.spec);
  p.config.T = 1.0;
  p.config.u0 = nodal(xy, [](double x, double) {
    return std::max(0.0, std::sin(2.0 * kPi * x));
  });
  p.config.load = Load::constant(
      nodal(xy, [](double x, double) { return -8.0 * std::sin(kPi * x); }));
  // The fixed data make T* small; 20 steps span it.
  p.config.dt = horizon_of(build(p.spec), p.config) / 20.0;
  return p;
}

Preset obstacle_converge_1d() {
  Preset p;
  p.name = "obstacle_converge_1d";
  p.spec.kind = ProblemKind::kObstacleCd1d;
  p.spec.resolution = 31;
  p.spec.convection = {0.5};
  // Slow diffusion keeps the right half in contact while the left half
  // spreads into it.
  p.spec.diffusion = 0.1;
  const DenseMatrix xy = node_coordinates(p.spec);
  p.config.T = 1.0;
  p.config.dt = 1.0 / 40.0;
  p.study_dts = halvings(1.0 / 40.0, 4);
  p.config.u0 = nodal(xy, [](double x, double) {
    return 0.1 * std::max(0.0, std::sin(2.0 * kPi * x));
  });
  p.config.load = Load::constant(Vector::Constant(xy.rows(), -0.02));
  return p;
}

Preset obstacle_2d_small() {
  Preset p;
  p.name = "obstacle_2d_small";
  p.spec.kind = ProblemKind::kObstacleCd2d;
  p.spec.resolution = 3;
  p.spec.convection = {0.5, 0.25};
  const DenseMatrix xy = node_coordinates(p.spec);
  p.config.T = 1.0;
  p.config.u0 = nodal(xy, [](double x, double y) {
    return 0.02 * std::sin(kPi * x) * std::sin(kPi * y);
  });
  p.config.load = Load::constant(Vector::Constant(xy.rows(), -0.02));
  p.config.dt = horizon_of(build(p.spec), p.config) / 10.0;
  return p;
}

Preset friction_smoke() {
  Preset p;
  p.name = "friction_smoke";
  p.spec.kind = ProblemKind::kFrictionNeumann1d;
  p.spec.resolution = 17;
  p.spec.convection = {0.5};
  p.spec.friction_left = 0.02;
  p.spec.friction_right = 0.02;
  const DenseMatrix xy = node_coordinates(p.spec);
  p.config.T = 1.0;
  p.config.u0 = nodal(xy, [](double x, double) {
    return 0.04 * std::cos(kPi * x);
  });
  p.config.load = Load::separable(
      nodal(xy, [](double x, double) { return 0.03 * (x - 0.5); }),
      TemporalProfile::sine(1.0, 2.0 * kPi));
  p.config.dt = horizon_of(build(p.spec), p.config) / 10.0;
  return p;
}

ProblemSpec lipschitz_spec() {
  ProblemSpec s;
  s.kind = ProblemKind::kObstacleCd1d;
  s.resolution = 31;
  s.convection = {0.5};
  return s;
}

Load lipschitz_load(const DenseMatrix& xy) {
  return Load::separable(
      nodal(xy, [](double x, double) { return 0.03 * std::sin(2.0 * kPi * x); }),
      TemporalProfile::sine(0.5, 2.0 * kPi, 1.0));
}

// Fixed point of w ↦ u(w), where u(w) solves the stationary VI with frozen
// velocity w; residual measured on the full problem with w = u.
Vector stationary_datum(const Problem& problem, const Vector& f) {
  const int n = problem.dim();
  SolverOptions opts;
  opts.tol = 1e-13;
  opts.max_iter = 200000;
  Vector u = Vector::Zero(n);
  for (int it = 0; it < 200; ++it) {
    OseenData data{problem.gelfand, problem.phi, problem.convection, 0.0, u, f};
    opts.initial = u;
    StationarySolve s = solve_stationary_vi(data, opts);
    if (!s.certified) {
      throw SolverError("stationary datum: inner solve not certified");
    }
    const double change = problem.gelfand.h_norm(s.u - u);
    u = std::move(s.u);
    OseenData full{problem.gelfand, problem.phi, problem.convection, 0.0, u, f};
    if (change <= 1e-14 && vi_residual(full, u) <= 1e-12) return u;
  }
  OseenData full{problem.gelfand, problem.phi, problem.convection, 0.0, u, f};
  if (vi_residual(full, u) > 1e-10) {
    throw SolverError("stationary datum: fixed-point iteration did not settle");
  }
  return u;
}

Preset lipschitz_compatible() {
  Preset p;
  p.name = "lipschitz_compatible";
  p.spec = lipschitz_spec();
  const DenseMatrix xy = node_coordinates(p.spec);
  p.config.T = 1.0;
  p.config.load = lipschitz_load(xy);
  p.config.u0 = stationary_datum(build(p.spec), p.config.load.at(0.0));
  const double T_star = horizon_of(build(p.spec), p.config);
  p.config.dt = T_star / 8.0;
  p.study_dts = halvings(T_star / 4.0, 4);
  return p;
}

Preset lipschitz_incompatible() {
  Preset p;
  p.name = "lipschitz_incompatible";
  p.spec = lipschitz_spec();
  const DenseMatrix xy = node_coordinates(p.spec);
  p.config.T = 1.0;
  p.config.load = lipschitz_load(xy);
  // Box profile: feasible but with jumps, so (A + ∂φ)(u⁰) is far from H.
  p.config.u0 = nodal(xy, [](double x, double) {
    return x > 0.25 && x < 0.75 ? 0.03 : 0.0;
  });
  // Coarsest step T*/2, finest T*/16; all well above h² so the jump is
  // resolved in space.
  const double T_star = horizon_of(build(p.spec), p.config);
  p.config.dt = T_star / 2.0;
  p.study_dts = halvings(T_star / 2.0, 4);
  return p;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "linear_scalar",        "obstacle_smoke_1d", "obstacle_converge_1d",
      "obstacle_2d_small",    "friction_smoke",    "lipschitz_compatible",
      "lipschitz_incompatible"};
  return names;
}

Preset preset(const std::string& name) {
  if (name == "linear_scalar") return linear_scalar();
  if (name == "obstacle_smoke_1d") return obstacle_smoke_1d();
  if (name == "obstacle_converge_1d") return obstacle_converge_1d();
  if (name == "obstacle_2d_small") return obstacle_2d_small();
  if (name == "friction_smoke") return friction_smoke();
  if (name == "lipschitz_compatible") return lipschitz_compatible();
  if (name == "lipschitz_incompatible") return lipschitz_incompatible();
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw ContractError("unknown preset '" + name + "' (known: " + list + ")");
}

}  // namespace rothevi
