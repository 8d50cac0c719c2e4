#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "rothevi_cli/cli.hpp"

namespace rothevi::cli {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string trajectory_csv(const Problem& problem, const Trajectory& traj) {
  (void)problem;
  std::string out = "n,t,norm_H,norm_V,norm_W,phi,delta_H,residual\n";
  for (std::size_t n = 0; n < traj.records.size(); ++n) {
    const StepRecord& r = traj.records[n];
    out += std::to_string(n) + ',' + fmt(static_cast<double>(n) * traj.dt) + ',' +
           fmt(r.norm_h) + ',' + fmt(r.norm_v) + ',' + fmt(r.norm_w) + ',' +
           fmt(r.phi) + ',' + fmt(r.delta_h) + ',' + fmt(r.residual) + '\n';
  }
  return out;
}

std::string study_csv(const ConvergenceReport& report) {
  std::string out = "dt,distance_to_next,empirical_order\n";
  for (std::size_t k = 0; k < report.dts.size(); ++k) {
    out += fmt(report.dts[k]) + ',';
    if (k < report.distances.size()) out += fmt(report.distances[k]);
    out += ',';
    if (k < report.orders.size() && std::isfinite(report.orders[k])) {
      out += fmt(report.orders[k]);
    }
    out += '\n';
  }
  return out;
}

json report_to_json(const CheckReport& r) {
  json j{{"pass", r.pass},
         {"worst_slack", r.worst_slack},
         {"tolerance", r.tolerance},
         {"steps", r.slacks.size()}};
  j["context"] = r.context;
  j["notes"] = r.notes;
  return j;
}

OutputPaths write_outputs(const Problem& problem, const Trajectory& traj,
                          const std::vector<CheckReport>& reports,
                          const std::filesystem::path& dir,
                          const ConvergenceReport* study, const json& extra) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  OutputPaths paths{dir / "trajectory.csv", dir / "summary.json", std::nullopt};
  write_file(paths.trajectory, trajectory_csv(problem, traj));

  json summary = extra;
  summary["dim"] = problem.dim();
  summary["dt"] = traj.dt;
  summary["N"] = traj.steps();
  summary["E0"] = traj.E0;
  summary["F"] = traj.F;
  summary["beta"] = traj.beta;
  summary["T_star"] = traj.T_star;
  summary["dt_max"] = traj.dt_max;
  json ledger = json::object();
  for (const auto& row : problem.ledger.rows()) {
    ledger[row.name] = {{"value", row.value}, {"provenance", row.provenance}};
  }
  summary["ledger"] = ledger;
  json checks = json::object();
  for (const auto& r : reports) checks[r.name] = report_to_json(r);
  summary["checks"] = checks;

  if (study) {
    paths.study = dir / "study.csv";
    write_file(*paths.study, study_csv(*study));
    summary["study"] = {{"dts", study->dts},
                        {"T_common", study->T_common},
                        {"distances", study->distances},
                        {"orders", study->orders},
                        {"reference_errors", study->reference_errors},
                        {"reference_orders", study->reference_orders}};
  }
  write_file(paths.summary, summary.dump(2) + '\n');
  return paths;
}

}  // namespace rothevi::cli
