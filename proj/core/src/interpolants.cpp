#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>

#include "rothevi/rothe.hpp"

namespace rothevi {

const char* to_string(InterpolantKind kind) {
  switch (kind) {
    case InterpolantKind::kPcRight:
      return "pc_right";
    case InterpolantKind::kPcLeft:
      return "pc_left";
    case InterpolantKind::kPl:
      return "pl";
    case InterpolantKind::kPlShifted:
      return "pl_shifted";
  }
  return "unknown";
}

namespace {

constexpr double kKnotTol = 1e-9;

// Gauss–Legendre nodes/weights on [0, 1].
constexpr std::array<double, 5> kNodes01 = {
    0.0469100770306680036, 0.2307653449471584545, 0.5,
    0.7692346550528415455, 0.9530899229693319964};
constexpr std::array<double, 5> kWeights01 = {
    0.1184634425280945438, 0.2393143352496832320, 0.2844444444444444444,
    0.2393143352496832320, 0.1184634425280945438};

double effective_horizon(const Trajectory& traj) {
  const double h = traj.horizon();
  return traj.T_star > 0.0 ? std::min(traj.T_star, h) : h;
}

Vector blend(const Trajectory& traj, int n, double s) {
  // (1 - s) u^{n-1} + s u^n
  return (1.0 - s) * traj.states[static_cast<std::size_t>(n - 1)] +
         s * traj.states[static_cast<std::size_t>(n)];
}

// Squared V distance integrated over [0, T_end], split at every knot in
// `knots` (sorted, containing 0 and T_end).
template <typename Diff>
double integrate_v_sq(const Problem& problem, const std::vector<double>& knots,
                      Diff&& diff) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double len = knots[k + 1] - a;
    if (len <= 0.0) continue;
    double part = 0.0;
    for (std::size_t q = 0; q < kNodes01.size(); ++q) {
      const double v = problem.gelfand.v_norm(diff(a + kNodes01[q] * len));
      part += kWeights01[q] * v * v;
    }
    acc += part * len;
  }
  return acc;
}

std::vector<double> knot_union(const std::vector<const Trajectory*>& trajs,
                               double T_end) {
  std::vector<double> knots{0.0, T_end};
  for (const Trajectory* t : trajs) {
    for (int n = 1; n <= t->steps(); ++n) {
      const double x = n * t->dt;
      if (x < T_end) knots.push_back(x);
    }
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> out;
  for (double x : knots) {
    if (out.empty() || x - out.back() > 1e-12 * std::max(T_end, 1e-300)) {
      out.push_back(x);
    }
  }
  out.back() = T_end;
  return out;
}

double distance_on(const Problem& problem, const Trajectory& a,
                   InterpolantKind ka, const Trajectory& b, InterpolantKind kb,
                   double T_end) {
  require(!a.states.empty() && !b.states.empty(),
          "traj_distance_L2V: empty trajectory");
  require(a.states[0].size() == b.states[0].size() &&
              a.states[0].size() == problem.dim(),
          "traj_distance_L2V: incompatible spatial dimensions");
  if (T_end <= 0.0) return 0.0;
  const auto knots = knot_union({&a, &b}, T_end);
  return std::sqrt(integrate_v_sq(problem, knots, [&](double t) -> Vector {
    return interpolant_eval(a, ka, t) - interpolant_eval(b, kb, t);
  }));
}

std::vector<double> log2_ratios(const std::vector<double>& values) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    out.push_back(values[k] > 0.0 && values[k + 1] > 0.0
                      ? std::log2(values[k] / values[k + 1])
                      : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace

Vector interpolant_eval(const Trajectory& traj, InterpolantKind kind,
                        double t) {
  const int N = traj.steps();
  require(N >= 1, "interpolant_eval: trajectory has no steps");
  const double dt = traj.dt;
  const double s = t / dt;
  require(t >= -kKnotTol * dt && s <= N + kKnotTol,
          "interpolant_eval: t outside [0, N dt]");

  const double k_round = std::round(s);
  const bool at_knot = std::abs(s - k_round) <= kKnotTol;
  const int knot = std::clamp(static_cast<int>(k_round), 0, N);
  const int n = std::clamp(static_cast<int>(std::ceil(s)), 1, N);
  const auto& u = traj.states;

  switch (kind) {
    case InterpolantKind::kPcRight:
      return at_knot ? u[static_cast<std::size_t>(knot)]
                     : u[static_cast<std::size_t>(n)];
    case InterpolantKind::kPcLeft:
      if (at_knot) return u[static_cast<std::size_t>(std::min(knot, N - 1))];
      return u[static_cast<std::size_t>(n - 1)];
    case InterpolantKind::kPlShifted:
      if (s <= 1.0 + kKnotTol) return u[1];
      [[fallthrough]];
    case InterpolantKind::kPl:
      if (at_knot) return u[static_cast<std::size_t>(knot)];
      return blend(traj, n, s - (n - 1));
  }
  return {};
}

double traj_distance_L2V(const Problem& problem, const Trajectory& a,
                         InterpolantKind kind_a, const Trajectory& b,
                         InterpolantKind kind_b) {
  const double T_end = std::min(effective_horizon(a), effective_horizon(b));
  return distance_on(problem, a, kind_a, b, kind_b, T_end);
}

double traj_distance_L2V(const Problem& problem, const Trajectory& a,
                         const Trajectory& b, InterpolantKind kind) {
  return traj_distance_L2V(problem, a, kind, b, kind);
}

double reference_distance_L2V(const Problem& problem, const Trajectory& traj,
                              InterpolantKind kind,
                              const std::function<Vector(double)>& reference,
                              double T_end) {
  require(static_cast<bool>(reference), "reference_distance_L2V: no reference");
  T_end = std::min(T_end, traj.horizon());
  if (T_end <= 0.0) return 0.0;
  const auto knots = knot_union({&traj}, T_end);
  return std::sqrt(integrate_v_sq(problem, knots, [&](double t) -> Vector {
    return interpolant_eval(traj, kind, t) - reference(t);
  }));
}

ConvergenceReport convergence_study(
    const Problem& problem, const RotheConfig& config,
    const std::vector<double>& dt_list,
    const std::function<Vector(double)>& reference) {
  require(dt_list.size() >= 3, "convergence_study: need at least 3 dt values");
  for (std::size_t k = 0; k + 1 < dt_list.size(); ++k) {
    require(std::abs(dt_list[k + 1] - 0.5 * dt_list[k]) <=
                1e-12 * dt_list[k],
            "convergence_study: each dt must be half the previous one");
  }

  ConvergenceReport report;
  report.dts = dt_list;
  std::vector<std::future<Trajectory>> pending;
  for (double dt : dt_list) {
    RotheConfig c = config;
    c.dt = dt;
    pending.push_back(std::async(std::launch::async, [&problem, c] {
      return rothe_run(problem, c);
    }));
  }
  for (auto& f : pending) report.runs.push_back(f.get());

  report.T_common = std::numeric_limits<double>::infinity();
  for (const auto& run : report.runs) {
    report.T_common = std::min(report.T_common, effective_horizon(run));
  }
  for (std::size_t k = 0; k + 1 < report.runs.size(); ++k) {
    report.distances.push_back(distance_on(problem, report.runs[k],
                                           InterpolantKind::kPl,
                                           report.runs[k + 1],
                                           InterpolantKind::kPl,
                                           report.T_common));
  }
  report.orders = log2_ratios(report.distances);
  if (reference) {
    for (const auto& run : report.runs) {
      report.reference_errors.push_back(reference_distance_L2V(
          problem, run, InterpolantKind::kPl, reference, report.T_common));
    }
    report.reference_orders = log2_ratios(report.reference_errors);
  }
  return report;
}

}  // namespace rothevi
