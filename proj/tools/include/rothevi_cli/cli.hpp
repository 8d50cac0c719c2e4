#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rothevi/rothevi.hpp"

namespace rothevi::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kCheckFailed = 2 };

struct ConstantsOptions {
  /// "configured" uses the ledger as given, "estimate" re-estimates it.
  std::string mode = "configured";
  int samples = 200;
  std::uint64_t seed = 0;
};

struct CheckOptions {
  /// energy | apriori | jensen | gronwall | lipschitz | all
  std::string suite = "all";
  double tolerance = 1e-9;
  double delta = 1e-3;
  /// Lipschitz refinement. Empty skips the check under "all" and selects
  /// four halvings of rothe.dt under "lipschitz".
  std::vector<double> lipschitz_dts;
};

struct RunConfig {
  /// Preset the problem was taken from, if any (informational).
  std::string preset;
  ProblemSpec problem;
  RotheConfig rothe;
  ConstantsOptions constants;
  /// Convergence-study step sizes; empty selects halvings of rothe.dt.
  std::vector<double> study_dts;
  CheckOptions checks;
  std::string output_dir = "rothevi_out";
};

/// Parses a config document. `problem` may be a preset name or a full
/// problem object; fields given next to a preset override it.
RunConfig config_from_json(const nlohmann::json& doc);

/// Fully explicit form; config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const RunConfig& config);

/// Reads a config file. A path that does not exist is retried with a
/// ".json" suffix and finally interpreted as presets/<name>.
RunConfig load_config(const std::string& path);

nlohmann::json report_to_json(const CheckReport& report);

struct OutputPaths {
  std::filesystem::path trajectory;
  std::filesystem::path summary;
  std::optional<std::filesystem::path> study;
};

/// Writes trajectory.csv and summary.json (and study.csv when a
/// convergence report is given) into dir.
OutputPaths write_outputs(const Problem& problem, const Trajectory& traj,
                          const std::vector<CheckReport>& reports,
                          const std::filesystem::path& dir,
                          const ConvergenceReport* study = nullptr,
                          const nlohmann::json& extra = nlohmann::json::object());

/// Trajectory table with 17 significant digits.
std::string trajectory_csv(const Problem& problem, const Trajectory& traj);
std::string study_csv(const ConvergenceReport& report);

/// Entry point behind the executable; returns the process exit code.
int run_command(int argc, const char* const* argv);

}  // namespace rothevi::cli
