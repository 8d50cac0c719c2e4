#include "rothevi/rothe.hpp"

#include <cmath>
#include <future>
#include <string>

namespace rothevi {

void Problem::validate() const {
  require_dim(phi.dim(), gelfand.dim(), "Problem functional");
  require_dim(convection.dim(), gelfand.dim(), "Problem convection");
  ledger.validate();
}

double compute_beta(double E0, double F, double theta2, double M_prime) {
  require(E0 >= 0.0 && F >= 0.0, "compute_beta: E0 and F must be >= 0");
  require(theta2 >= 1.0, "compute_beta: theta2 must be >= 1");
  require(M_prime >= 0.0, "compute_beta: M' must be >= 0");
  if (F == 0.0 || M_prime == 0.0) return 0.0;
  auto h = [&](double beta) {
    return std::pow(beta, theta2 + 1.0) -
           4.0 * M_prime * std::pow(E0 + beta, theta2) * F;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (h(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  // β^{θ+1}/(E0+β)^θ is increasing, so the sign change is unique.
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

double compute_T_star(double E0, double beta, double theta2, double M_prime,
                      double T) {
  require(E0 >= 0.0 && beta >= 0.0 && T >= 0.0,
          "compute_T_star: arguments must be nonnegative");
  require(M_prime >= 0.0, "compute_T_star: M' must be >= 0");
  require(theta2 >= 1.0, "compute_T_star: theta2 must be >= 1");
  const double energy = E0 + beta;
  if (energy == 0.0 || M_prime == 0.0) return T;
  return std::min(1.0 / (8.0 * M_prime * std::pow(energy, theta2) * theta2),
                  T);
}

double admissible_dt_bound(double E0, double beta,
                           const ConstantsLedger& ledger) {
  const double theta1 = ledger.theta1.value;
  const double theta2 = ledger.theta2.value;
  const double v_bound = std::pow(2.0, 1.0 + 1.0 / theta2) * (E0 + beta);
  const double c = ledger.C_theta1_quarter();
  return 1.0 /
         (c * std::pow(2.0, theta1) * std::pow(v_bound, theta1) + 0.5);
}

double initial_energy(const Problem& problem, const Vector& u0) {
  const double phi0 = problem.phi.eval(u0);
  require(phi0 < kInfinity, "initial datum outside the domain of phi");
  const double v = problem.gelfand.v_norm(u0);
  return v * v + 2.0 * phi0 + 0.5 * problem.ledger.C_phi3();
}

namespace {

int step_count(double horizon, double dt) {
  return std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9)));
}

void check_config(const Problem& problem, const RotheConfig& config) {
  problem.validate();
  require(config.dt > 0.0 && std::isfinite(config.dt),
          "rothe: dt must be positive");
  require(config.T > 0.0, "rothe: T must be positive");
  require(config.dt <= config.T * (1.0 + 1e-12), "rothe: dt must be <= T");
  require_dim(config.u0.size(), problem.dim(), "rothe u0");
  require_dim(config.load.dim(), problem.dim(), "rothe load");
  require(problem.phi.feasible(config.u0),
          "rothe: initial datum outside the domain of phi");
}

StepRecord describe(const Problem& problem, const Vector& u) {
  const NormTriple n = norm_triple(problem.gelfand, u);
  StepRecord r;
  r.norm_h = n.h;
  r.norm_v = n.v;
  r.norm_w = n.w;
  r.phi = problem.phi.eval(u);
  return r;
}

}  // namespace

double load_energy(const Problem& problem, const Load& load, double dt,
                   double T) {
  const int steps = step_count(T, dt);
  if (load.kind() == Load::Kind::kConstant) {
    const double fh = problem.gelfand.h_inner(load.spatial(), load.spatial());
    return fh * std::max(steps * dt, T);
  }
  double discrete = 0.0;
  for (int n = 1; n <= steps; ++n) {
    const Vector fn = average_load(load, n, dt);
    discrete += problem.gelfand.h_inner(fn, fn) * dt;
  }
  double continuous = 0.0;
  for (int n = 1; n <= steps; ++n) {
    const double t0 = (n - 1) * dt;
    const double t1 = std::min(n * dt, T);
    if (t1 > t0) continuous += load.h_norm_sq_integral(problem.gelfand, t0, t1);
  }
  return std::max(discrete, continuous);
}

Trajectory rothe_steps(const Problem& problem, const RotheConfig& config,
                       int steps) {
  check_config(problem, config);
  require(steps >= 0, "rothe_steps: negative step count");
  const double dt = config.dt;

  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(config.u0);
  traj.loads.push_back(config.load.at(0.0));
  traj.records.push_back(describe(problem, config.u0));

  for (int n = 1; n <= steps; ++n) {
    const Vector& prev = traj.states.back();
    Vector fn = average_load(config.load, n, dt);
    OseenData data{problem.gelfand, problem.phi, problem.convection,
                   1.0 / dt,        prev,        fn + prev / dt};
    SolverOptions opts = config.solver;
    opts.initial = prev;
    StationarySolve solve = solve_stationary_vi(data, opts);
    if (!solve.certified) {
      throw SolverError("rothe: step " + std::to_string(n) +
                        " not certified (residual " +
                        std::to_string(solve.residual) + " after " +
                        std::to_string(solve.iterations) + " sweeps)");
    }
    StepRecord rec = describe(problem, solve.u);
    rec.delta_h = problem.gelfand.h_norm(solve.u - prev) / dt;
    rec.residual = solve.residual;
    rec.iterations = solve.iterations;
    traj.records.push_back(rec);
    traj.loads.push_back(std::move(fn));
    traj.states.push_back(std::move(solve.u));
  }
  return traj;
}

Trajectory rothe_run(const Problem& problem, const RotheConfig& config) {
  check_config(problem, config);
  const ConstantsLedger& ledger = problem.ledger;
  const double theta2 = ledger.theta2.value;
  const double M_prime = ledger.M_prime();

  const double E0 = initial_energy(problem, config.u0);
  const double F = load_energy(problem, config.load, config.dt, config.T);
  const double beta = compute_beta(E0, F, theta2, M_prime);
  const double T_star = compute_T_star(E0, beta, theta2, M_prime, config.T);
  const double dt_max = admissible_dt_bound(E0, beta, ledger);
  if (config.enforce_admissibility && config.dt > dt_max) {
    throw ContractError("rothe: dt = " + std::to_string(config.dt) +
                        " exceeds the admissible bound dt_max = " +
                        std::to_string(dt_max));
  }

  Trajectory traj = rothe_steps(problem, config, step_count(T_star, config.dt));
  traj.E0 = E0;
  traj.F = F;
  traj.beta = beta;
  traj.T_star = T_star;
  traj.dt_max = dt_max;
  const double bound = std::pow(2.0, 1.0 + 1.0 / theta2) * (E0 + beta);
  traj.bound_slack.reserve(traj.records.size());
  for (const auto& r : traj.records) {
    traj.bound_slack.push_back(bound - r.norm_v * r.norm_v);
  }
  return traj;
}

}  // namespace rothevi
