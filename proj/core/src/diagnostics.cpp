#include "rothevi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace rothevi {

void CheckReport::finalize() {
  worst_slack = kInfinity;
  for (double s : slacks) worst_slack = std::min(worst_slack, s);
  pass = !(worst_slack < -tolerance);
}

namespace {

double max_abs(std::initializer_list<double> terms) {
  double m = 0.0;
  for (double t : terms) m = std::max(m, std::abs(t));
  return m;
}

double sq(double x) { return x * x; }

void require_steps(const Trajectory& traj, const char* what) {
  require(traj.steps() >= 1, std::string(what) + ": trajectory has no steps");
  require(traj.loads.size() == traj.states.size(),
          std::string(what) + ": trajectory loads missing");
}

void note_worst(CheckReport& report) {
  if (report.slacks.empty()) return;
  const auto it = std::min_element(report.slacks.begin(), report.slacks.end());
  report.context["worst_index"] =
      static_cast<double>(it - report.slacks.begin()) + 1.0;
}

}  // namespace

CheckReport step_energy_check(const Problem& problem, const Trajectory& traj,
                              double tolerance) {
  require_steps(traj, "step_energy_check");
  const DiscreteGelfand& g = problem.gelfand;
  const double dt = traj.dt;

  CheckReport report;
  report.name = "energy";
  report.tolerance = tolerance;
  for (int n = 1; n <= traj.steps(); ++n) {
    const Vector& u = traj.states[static_cast<std::size_t>(n)];
    const Vector& p = traj.states[static_cast<std::size_t>(n - 1)];
    const Vector& f = traj.loads[static_cast<std::size_t>(n)];
    const Vector d = (u - p) / dt;

    const double kinetic = g.h_inner(d, d);
    const double vu = sq(g.v_norm(u));
    const double vp = sq(g.v_norm(p));
    const double vd = sq(g.v_norm(u - p));
    const double dphi = problem.phi.eval(u) - problem.phi.eval(p);
    const double load = g.h_inner(f, d);
    const double conv = problem.convection.trilinear(p, u, d);

    const double lhs = kinetic + (vu - vp + vd) / (2.0 * dt) + dphi / dt;
    const double rhs = load - conv;
    const double scale = max_abs({kinetic, vu / dt, vp / dt, vd / dt,
                                  dphi / dt, load, conv});
    report.slacks.push_back((rhs - lhs) / std::max(1.0, scale));
  }
  report.finalize();
  note_worst(report);
  return report;
}

CheckReport apriori_check(const Problem& problem, const Trajectory& traj,
                          double tolerance) {
  require_steps(traj, "apriori_check");
  const DiscreteGelfand& g = problem.gelfand;
  const double dt = traj.dt;
  const double M = problem.ledger.M();
  const double theta2 = problem.ledger.theta2.value;

  CheckReport report;
  report.name = "apriori";
  report.tolerance = tolerance;
  report.context["M"] = M;
  for (int n = 1; n <= traj.steps(); ++n) {
    const Vector& u = traj.states[static_cast<std::size_t>(n)];
    const Vector& p = traj.states[static_cast<std::size_t>(n - 1)];
    const Vector& f = traj.loads[static_cast<std::size_t>(n)];
    const Vector d = (u - p) / dt;

    const double kinetic = g.h_inner(d, d);
    const double vu = sq(g.v_norm(u));
    const double vp = sq(g.v_norm(p));
    const double vd = sq(g.v_norm(u - p));
    const double dphi = problem.phi.eval(u) - problem.phi.eval(p);
    const double growth = std::pow(vp, theta2) * vu;
    const double fh = g.h_inner(f, f);

    const double lhs = kinetic + (vu - vp + vd) / dt + 2.0 * dphi / dt;
    const double rhs = M * (growth + fh + 1.0);
    const double scale =
        max_abs({kinetic, vu / dt, vp / dt, vd / dt, dphi / dt, rhs});
    report.slacks.push_back((rhs - lhs) / std::max(1.0, scale));
  }
  report.finalize();
  note_worst(report);
  return report;
}

CheckReport final_bound_check(const Problem& problem, const Trajectory& traj,
                              double tolerance) {
  require_steps(traj, "final_bound_check");
  const double theta2 = problem.ledger.theta2.value;
  const double bound = std::pow(2.0, 1.0 + 1.0 / theta2) * (traj.E0 + traj.beta);

  CheckReport report;
  report.name = "final_bound";
  report.tolerance = tolerance;
  report.context["bound"] = bound;
  for (int n = 1; n <= traj.steps(); ++n) {
    const double v = problem.gelfand.v_norm(traj.states[static_cast<std::size_t>(n)]);
    report.slacks.push_back((bound - v * v) / std::max(1.0, bound));
  }
  report.finalize();
  note_worst(report);
  if (!report.pass) {
    report.notes.push_back("V bound exceeded at step " +
                           std::to_string(static_cast<int>(
                               report.context["worst_index"])));
  }
  return report;
}

SequenceBound difference_sequence_bound(double x0, double theta, double Mc,
                                        double dt, const std::vector<double>& y,
                                        double beta) {
  require(theta >= 1.0, "difference_sequence_bound: theta must be >= 1");
  require(Mc > 0.0 && dt > 0.0 && beta > 0.0,
          "difference_sequence_bound: M, dt and beta must be positive");
  require(x0 >= beta, "difference_sequence_bound: x0 must be >= beta");
  const double lead = 4.0 * Mc * std::pow(x0, theta);
  const double load_cap = std::pow(beta, theta + 1.0);

  SequenceBound out;
  out.bound = std::pow(2.0, 1.0 / theta) * x0;
  double load = 0.0;
  for (std::size_t m = 0; m < y.size(); ++m) {
    const int n = static_cast<int>(m) + 1;
    load += y[m] * dt;
    if (lead * n * dt > 1.0 / theta || lead * load > load_cap) break;
    out.n_max = n;
  }
  return out;
}

SyntheticSequence make_sequence(std::uint64_t seed, SequenceProfile profile) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };

  SyntheticSequence s;
  s.theta = uniform(1.0, 3.0);
  s.Mc = std::exp(uniform(std::log(0.2), std::log(2.0)));
  s.beta = uniform(0.2, 2.0);
  const double x0 = s.beta * uniform(1.0, 2.5);
  const int good = std::uniform_int_distribution<int>(5, 60)(rng);
  const int length = good + 10;
  const double lead = 4.0 * s.Mc * std::pow(x0, s.theta);
  s.dt = 1.0 / (lead * s.theta * good);

  // Σ y_m Δt over the good range consumes a fraction of β^{θ+1} / lead.
  const double budget = std::pow(s.beta, s.theta + 1.0) / lead;
  const double fraction = uniform(0.2, 1.0) * (1.0 - 1e-9);
  std::vector<double> weights(static_cast<std::size_t>(good));
  if (profile == SequenceProfile::kFrontLoaded) {
    std::fill(weights.begin(), weights.end(), 0.02 / good);
    weights[0] += 0.98;
  } else {
    for (double& w : weights) w = uniform(0.05, 1.0);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  s.y.reserve(static_cast<std::size_t>(length));
  for (double w : weights) s.y.push_back(fraction * budget * w / (total * s.dt));
  const double tail = fraction * budget / (good * s.dt);
  while (static_cast<int>(s.y.size()) < length) {
    s.y.push_back(tail * uniform(0.05, 1.0));
  }

  s.x.reserve(static_cast<std::size_t>(length) + 1);
  s.x.push_back(x0);
  for (int n = 1; n <= length; ++n) {
    const double prev = s.x.back();
    const double yn = s.y[static_cast<std::size_t>(n - 1)];
    const double denom = 1.0 - s.dt * s.Mc * std::pow(prev, s.theta);
    const double cap = denom > 0.0 ? (prev + s.dt * s.Mc * yn) / denom
                                   : 10.0 * prev;
    double next = cap * (1.0 - 1e-12);
    if (profile == SequenceProfile::kRandom) {
      next = s.beta + std::sqrt(unit(rng)) * (next - s.beta);
    }
    s.x.push_back(std::max(s.beta, next));
  }
  return s;
}

CheckReport difference_sequence_study(
    const std::vector<SyntheticSequence>& sequences, bool theta_on_load_term) {
  CheckReport report;
  report.name = theta_on_load_term ? "difference_sequence_corrected"
                                   : "difference_sequence";
  report.tolerance = 1e-12;
  int violations = 0;
  double n_max_total = 0.0;
  for (const auto& s : sequences) {
    // The corrected reading charges the loads with the same factor θ as the
    // time term; it is equivalent to shrinking M on the load condition only.
    std::vector<double> y = s.y;
    if (theta_on_load_term) {
      for (double& v : y) v *= s.theta;
    }
    const SequenceBound b =
        difference_sequence_bound(s.x[0], s.theta, s.Mc, s.dt, y, s.beta);
    double slack = kInfinity;
    for (int n = 0; n <= b.n_max; ++n) {
      slack = std::min(slack,
                       (b.bound - s.x[static_cast<std::size_t>(n)]) / b.bound);
    }
    if (slack < -report.tolerance) ++violations;
    n_max_total += b.n_max;
    report.slacks.push_back(slack);
  }
  report.finalize();
  report.context["sequences"] = static_cast<double>(sequences.size());
  report.context["violations"] = violations;
  report.context["mean_n_max"] =
      sequences.empty() ? 0.0 : n_max_total / static_cast<double>(sequences.size());
  return report;
}

CheckReport jensen_check(const ConvexFunctional& phi,
                         const std::vector<Vector>& samples) {
  require(samples.size() >= 2, "jensen_check: need at least 2 samples");
  Vector mean = Vector::Zero(phi.dim());
  double mean_phi = 0.0;
  for (const auto& s : samples) {
    require_dim(s.size(), phi.dim(), "jensen_check sample");
    mean += s;
    mean_phi += phi.eval(s);
  }
  const double count = static_cast<double>(samples.size());
  mean /= count;
  mean_phi /= count;
  const double phi_mean = phi.eval(mean);

  CheckReport report;
  report.name = "jensen";
  report.tolerance = 1e-12;
  report.context["mean_phi"] = mean_phi;
  report.context["phi_mean"] = phi_mean;
  if (std::isinf(mean_phi)) {
    report.slacks.push_back(kInfinity);
    report.notes.push_back("some samples lie outside the domain of phi");
  } else {
    const double scale = std::max({1.0, std::abs(mean_phi), std::abs(phi_mean)});
    report.slacks.push_back((mean_phi - phi_mean) / scale);
  }
  report.finalize();
  return report;
}

PerturbationRun perturbation_ratios(const Problem& problem,
                                    const RotheConfig& config, double delta,
                                    int steps) {
  require(delta >= 0.0, "perturbation_ratios: delta must be >= 0");
  const DiscreteGelfand& g = problem.gelfand;
  const Vector ones = Vector::Ones(problem.dim());
  const Vector direction = ones / g.h_norm(ones);

  RotheConfig shifted = config;
  shifted.u0 = problem.phi.project(config.u0 + delta * direction);

  PerturbationRun out;
  out.delta = g.h_norm(shifted.u0 - config.u0);
  const Trajectory a = rothe_steps(problem, config, steps);
  const Trajectory b = rothe_steps(problem, shifted, steps);
  out.ratios.reserve(a.states.size());
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    out.ratios.push_back(out.delta > 0.0
                             ? g.h_norm(a.states[n] - b.states[n]) / out.delta
                             : 0.0);
  }
  return out;
}

CheckReport gronwall_experiment(const Problem& problem,
                                const RotheConfig& config, double delta) {
  require(delta >= 0.0, "gronwall_experiment: delta must be >= 0");
  CheckReport report;
  report.name = "gronwall";
  report.tolerance = 1e-12;
  report.context["delta"] = delta;

  const int steps = std::max(1, rothe_run(problem, config).steps());
  report.context["steps"] = steps;
  if (delta == 0.0) {
    report.slacks.push_back(0.0);
    report.notes.push_back("delta = 0: trajectories coincide, ratio 0/0 taken as pass");
    report.finalize();
    return report;
  }
  const PerturbationRun full = perturbation_ratios(problem, config, delta, steps);
  const PerturbationRun half =
      perturbation_ratios(problem, config, 0.5 * delta, steps);
  // n = 0 is excluded: its ratio is 1 by construction.
  const double r_full = *std::max_element(full.ratios.begin() + 1, full.ratios.end());
  const double r_half = *std::max_element(half.ratios.begin() + 1, half.ratios.end());
  report.context["realized_delta"] = full.delta;
  report.context["r_delta"] = r_full;
  report.context["r_half_delta"] = r_half;
  if (full.delta == 0.0 || half.delta == 0.0) {
    report.slacks.push_back(0.0);
    report.notes.push_back("perturbation vanished after projection");
  } else {
    report.slacks.push_back((1.25 * r_full - r_half) / std::max(1.0, r_full));
  }
  report.finalize();
  return report;
}

CheckReport lipschitz_diagnostic(const Problem& problem,
                                 const RotheConfig& config,
                                 const std::vector<double>& dt_list) {
  require(dt_list.size() >= 2, "lipschitz_diagnostic: need at least 2 dt values");
  std::vector<double> L;
  for (double dt : dt_list) {
    RotheConfig c = config;
    c.dt = dt;
    const Trajectory traj = rothe_run(problem, c);
    double worst = 0.0;
    for (std::size_t n = 1; n < traj.records.size(); ++n) {
      worst = std::max(worst, traj.records[n].delta_h);
    }
    L.push_back(worst);
  }

  CheckReport report;
  report.name = "lipschitz";
  report.tolerance = 0.0;
  const double top = *std::max_element(L.begin(), L.end());
  const double noise = 1e-6 * top;
  for (std::size_t k = 0; k < L.size(); ++k) {
    report.context["dt_" + std::to_string(k)] = dt_list[k];
    report.context["L_" + std::to_string(k)] = L[k];
  }
  for (std::size_t k = 0; k + 1 < L.size(); ++k) {
    const double slack = 1.2 * L[k] + noise - L[k + 1];
    report.slacks.push_back(top > 0.0 ? slack / top : 0.0);
  }
  report.finalize();
  if (!report.pass) {
    report.notes.push_back("max ||delta^n||_H grows under refinement");
  }
  return report;
}

std::pair<double, double> covering_fit(const std::vector<double>& x,
                                       const std::vector<double>& y) {
  require(x.size() == y.size() && !x.empty(),
          "covering_fit: need matching nonempty samples");
  const std::size_t n = x.size();
  const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
  const double sum_y = std::accumulate(y.begin(), y.end(), 0.0);
  auto offset = [&](double a) {
    double b = 0.0;
    for (std::size_t i = 0; i < n; ++i) b = std::max(b, y[i] - a * x[i]);
    return b;
  };
  auto objective = [&](double a) {
    return a * sum_x + static_cast<double>(n) * offset(a) - sum_y;
  };

  // The objective is convex piecewise linear in a; its kinks sit at the
  // pairwise slopes and at the zero crossings yᵢ/xᵢ.
  std::vector<double> kinks{0.0};
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0) kinks.push_back(y[i] / x[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x[i] != x[j]) kinks.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  kinks.erase(std::remove_if(kinks.begin(), kinks.end(),
                             [](double a) { return !(a >= 0.0) || !std::isfinite(a); }),
              kinks.end());
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  std::size_t lo = 0;
  std::size_t hi = kinks.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (objective(kinks[mid]) <= objective(kinks[mid + 1])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {kinks[lo], offset(kinks[lo])};
}

namespace {

using Ratio = std::function<double(const std::vector<Vector>&)>;

// Maximum of `ratio` over random draws, refined by coordinate hill climbing
// from the best draw.
double maximize_ratio(const Ratio& ratio, int arity, int dim, int n_samples,
                      std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<Vector> best(static_cast<std::size_t>(arity), Vector::Zero(dim));
  double best_value = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    std::vector<Vector> args(static_cast<std::size_t>(arity), Vector(dim));
    for (auto& a : args) {
      for (int i = 0; i < dim; ++i) a[i] = normal(rng);
    }
    const double value = ratio(args);
    if (std::isfinite(value) && value > best_value) {
      best_value = value;
      best = std::move(args);
    }
  }
  if (best_value == 0.0) return 0.0;

  std::vector<double> step(static_cast<std::size_t>(arity));
  for (int k = 0; k < arity; ++k) {
    step[static_cast<std::size_t>(k)] =
        0.5 * best[static_cast<std::size_t>(k)].norm() / std::sqrt(dim);
  }
  for (int round = 0; round < 20; ++round) {
    bool improved = false;
    for (int k = 0; k < arity; ++k) {
      Vector& arg = best[static_cast<std::size_t>(k)];
      const double h = step[static_cast<std::size_t>(k)];
      for (int i = 0; i < dim; ++i) {
        for (double sign : {1.0, -1.0}) {
          const double saved = arg[i];
          arg[i] = saved + sign * h;
          const double value = ratio(best);
          if (std::isfinite(value) && value > best_value) {
            best_value = value;
            improved = true;
            break;
          }
          arg[i] = saved;
        }
      }
    }
    if (!improved) {
      for (double& h : step) h *= 0.5;
    }
  }
  return best_value;
}

double safe_ratio(double num, double den) {
  return den > 1e-300 ? num / den : 0.0;
}

}  // namespace

ConstantsLedger estimate_constants(const Problem& problem, int n_samples,
                                   std::uint64_t seed) {
  require(n_samples >= 100, "estimate_constants: need at least 100 samples");
  problem.validate();
  const DiscreteGelfand& g = problem.gelfand;
  const ConvectionOperator& B = problem.convection;
  const int dim = problem.dim();
  std::mt19937_64 rng(seed);

  ConstantsLedger ledger = problem.ledger;
  const double beta1 = 2.0 / ledger.theta1.value;
  const double gamma = 1.0 / ledger.theta2.value;
  auto estimated = [](double v) {
    return LedgerEntry{v, Provenance::kEstimated};
  };

  if (B.is_zero()) {
    ledger.C_B = ledger.C_H1 = ledger.C_H3 = ledger.C_H4 = estimated(0.0);
  } else {
    ledger.C_B = estimated(maximize_ratio(
        [&](const std::vector<Vector>& a) {
          return safe_ratio(std::abs(B.trilinear(a[0], a[1], a[2])),
                            g.v_norm(a[0]) * g.v_norm(a[1]) * g.v_norm(a[2]));
        },
        3, dim, n_samples, rng));
    ledger.C_H1 = estimated(maximize_ratio(
        [&](const std::vector<Vector>& a) {
          const double vv = g.v_norm(a[1]);
          return safe_ratio(std::abs(B.trilinear(a[0], a[1], a[1])),
                            g.v_norm(a[0]) * vv *
                                std::pow(g.h_norm(a[1]), beta1) *
                                std::pow(vv, 1.0 - beta1));
        },
        2, dim, n_samples, rng));
    ledger.C_H3 = estimated(maximize_ratio(
        [&](const std::vector<Vector>& a) {
          return safe_ratio(g.dual_h_norm(B.apply(a[0], a[1])),
                            g.w_norm(a[0]) * g.v_norm(a[1]));
        },
        2, dim, n_samples, rng));
    ledger.C_H4 = estimated(maximize_ratio(
        [&](const std::vector<Vector>& a) {
          return safe_ratio(g.dual_h_norm(B.apply(a[0], a[1])),
                            g.v_norm(a[0]) * std::pow(g.v_norm(a[1]), gamma) *
                                std::pow(g.w_norm(a[1]), 1.0 - gamma));
        },
        2, dim, n_samples, rng));
  }

  // Stationary regularity: λ = 0, no convection.
  const ConvectionOperator none = ConvectionOperator::zero(dim);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> exponent(-2.0, 2.0);
  SolverOptions opts;
  opts.max_iter = std::max(20000, 500 * dim);
  std::vector<double> xs;
  std::vector<double> ys;
  for (int s = 0; s < n_samples; ++s) {
    Vector f(dim);
    for (int i = 0; i < dim; ++i) f[i] = normal(rng);
    f *= std::pow(10.0, exponent(rng));
    OseenData data{g, problem.phi, none, 0.0, Vector::Zero(dim), f};
    const StationarySolve solve = solve_stationary_vi(data, opts);
    if (!solve.certified) {
      throw SolverError("estimate_constants: stationary solve " +
                        std::to_string(s) + " not certified (residual " +
                        std::to_string(solve.residual) + ")");
    }
    xs.push_back(g.h_norm(f));
    ys.push_back(g.w_norm(solve.u));
  }
  auto [creg, cphi2] = covering_fit(xs, ys);
  ledger.C_reg = estimated(creg > 0.0 ? creg : 1e-12);
  ledger.C_phi2 = estimated(cphi2);
  ledger.C_phi1 = estimated(0.0);
  return ledger;
}

}  // namespace rothevi
