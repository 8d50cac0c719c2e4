#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "rothevi_cli/cli.hpp"

namespace rothevi::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const char* where,
                const std::set<std::string>& allowed) {
  require(obj.is_object(), std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ContractError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

int spec_dim(const ProblemSpec& s) {
  switch (s.kind) {
    case ProblemKind::kObstacleCd2d:
      return s.resolution * s.resolution;
    case ProblemKind::kExplicit:
      return static_cast<int>(s.mass.rows());
    default:
      return s.resolution;
  }
}

// A vector is an array of numbers or {"fill": value} of length `dim`.
Vector parse_vector(const json& j, int dim, const char* what) {
  if (j.is_object()) {
    check_keys(j, what, {"fill"});
    return Vector::Constant(dim, j.at("fill").get<double>());
  }
  require(j.is_array(), std::string(what) + ": expected an array or {\"fill\": x}");
  const auto values = j.get<std::vector<double>>();
  Vector v = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  require_dim(v.size(), dim, what);
  return v;
}

json vector_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

DenseMatrix parse_matrix(const json& j, const char* what) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  require(!rows.empty(), std::string(what) + ": empty matrix");
  DenseMatrix m(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == rows[0].size(), std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

FunctionalKind functional_kind(const std::string& name) {
  for (FunctionalKind k :
       {FunctionalKind::kZero, FunctionalKind::kObstacle, FunctionalKind::kFriction}) {
    if (name == to_string(k)) return k;
  }
  throw ContractError("unknown functional kind '" + name + "'");
}

Interval parse_interval(const json& j) {
  const auto v = j.get<std::vector<double>>();
  require(v.size() == 2, "domain: expected [lo, hi]");
  return {v[0], v[1]};
}

void merge_problem(const json& j, ProblemSpec& s) {
  check_keys(j, "problem",
             {"kind", "resolution", "x_domain", "y_domain", "convection",
              "diffusion", "obstacle_level", "friction_left", "friction_right",
              "reaction", "mass", "stiffness", "functional",
              "convection_entries"});
  if (j.contains("kind")) s.kind = problem_kind_from_string(j["kind"].get<std::string>());
  if (j.contains("resolution")) s.resolution = j["resolution"].get<int>();
  if (j.contains("x_domain")) s.x_domain = parse_interval(j["x_domain"]);
  if (j.contains("y_domain")) s.y_domain = parse_interval(j["y_domain"]);
  if (j.contains("convection")) s.convection = j["convection"].get<std::vector<double>>();
  if (j.contains("diffusion")) s.diffusion = j["diffusion"].get<double>();
  if (j.contains("obstacle_level")) s.obstacle_level = j["obstacle_level"].get<double>();
  if (j.contains("friction_left")) s.friction_left = j["friction_left"].get<double>();
  if (j.contains("friction_right")) s.friction_right = j["friction_right"].get<double>();
  if (j.contains("reaction")) s.reaction = j["reaction"].get<double>();
  if (j.contains("mass")) s.mass = parse_matrix(j["mass"], "problem.mass");
  if (j.contains("stiffness")) s.stiffness = parse_matrix(j["stiffness"], "problem.stiffness");
  if (j.contains("functional")) {
    const json& f = j["functional"];
    check_keys(f, "problem.functional", {"kind", "data"});
    s.functional = functional_kind(f.at("kind").get<std::string>());
    s.functional_data = f.contains("data")
                            ? parse_vector(f["data"], spec_dim(s), "problem.functional.data")
                            : Vector();
  }
  if (j.contains("convection_entries")) {
    s.convection_entries.clear();
    for (const auto& e : j["convection_entries"]) {
      require(e.is_array() && e.size() == 4,
              "problem.convection_entries: expected [row, col, slot, coeff]");
      s.convection_entries.push_back(
          {e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
    }
  }
}

json problem_json(const ProblemSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  if (s.kind == ProblemKind::kExplicit) {
    j["mass"] = matrix_json(s.mass);
    j["stiffness"] = matrix_json(s.stiffness);
    j["functional"] = {{"kind", to_string(s.functional)}};
    if (s.functional != FunctionalKind::kZero) {
      j["functional"]["data"] = vector_json(s.functional_data);
    }
    json entries = json::array();
    for (const auto& e : s.convection_entries) {
      entries.push_back({e.row, e.col, e.slot, e.coeff});
    }
    j["convection_entries"] = entries;
    return j;
  }
  j["resolution"] = s.resolution;
  j["x_domain"] = {s.x_domain.lo, s.x_domain.hi};
  j["y_domain"] = {s.y_domain.lo, s.y_domain.hi};
  j["convection"] = s.convection;
  j["diffusion"] = s.diffusion;
  j["obstacle_level"] = s.obstacle_level;
  j["friction_left"] = s.friction_left;
  j["friction_right"] = s.friction_right;
  j["reaction"] = s.reaction;
  return j;
}

TemporalProfile parse_profile(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "const") {
    check_keys(j, "profile", {"type", "value"});
    return TemporalProfile::constant(j.at("value").get<double>());
  }
  if (type == "linear") {
    check_keys(j, "profile", {"type", "a", "b"});
    return TemporalProfile::linear(j.at("a").get<double>(), j.at("b").get<double>());
  }
  if (type == "sin") {
    check_keys(j, "profile", {"type", "amplitude", "omega", "offset"});
    return TemporalProfile::sine(j.at("amplitude").get<double>(),
                                 j.at("omega").get<double>(),
                                 j.value("offset", 0.0));
  }
  if (type == "table") {
    check_keys(j, "profile", {"type", "times", "values"});
    return TemporalProfile::table(j.at("times").get<std::vector<double>>(),
                                  j.at("values").get<std::vector<double>>());
  }
  throw ContractError("profile: unknown type '" + type +
                      "' (expected const, linear, sin or table)");
}

json profile_json(const TemporalProfile& p) {
  switch (p.kind()) {
    case TemporalProfile::Kind::kConst:
      return {{"type", "const"}, {"value", p.a()}};
    case TemporalProfile::Kind::kLinear:
      return {{"type", "linear"}, {"a", p.a()}, {"b", p.b()}};
    case TemporalProfile::Kind::kSine:
      return {{"type", "sin"}, {"amplitude", p.b()}, {"omega", p.omega()}, {"offset", p.a()}};
    case TemporalProfile::Kind::kTable:
      return {{"type", "table"}, {"times", p.times()}, {"values", p.values()}};
    case TemporalProfile::Kind::kCustom:
      break;
  }
  throw ContractError("profile: custom profiles cannot be serialized");
}

Load parse_load(const json& j, int dim) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    check_keys(j, "load", {"type", "values"});
    return Load::constant(parse_vector(j.at("values"), dim, "load.values"));
  }
  if (type == "separable") {
    check_keys(j, "load", {"type", "spatial", "profile"});
    return Load::separable(parse_vector(j.at("spatial"), dim, "load.spatial"),
                           parse_profile(j.at("profile")));
  }
  if (type == "tabulated") {
    check_keys(j, "load", {"type", "times", "values"});
    std::vector<Vector> values;
    for (const auto& v : j.at("values")) values.push_back(parse_vector(v, dim, "load.values"));
    return Load::tabulated(j.at("times").get<std::vector<double>>(), std::move(values));
  }
  throw ContractError("load: unknown type '" + type +
                      "' (expected constant, separable or tabulated)");
}

json load_json(const Load& l) {
  switch (l.kind()) {
    case Load::Kind::kConstant:
      return {{"type", "constant"}, {"values", vector_json(l.spatial())}};
    case Load::Kind::kSeparable:
      return {{"type", "separable"},
              {"spatial", vector_json(l.spatial())},
              {"profile", profile_json(l.profile())}};
    case Load::Kind::kTabulated: {
      json values = json::array();
      for (const auto& v : l.values()) values.push_back(vector_json(v));
      return {{"type", "tabulated"}, {"times", l.times()}, {"values", values}};
    }
  }
  return {};
}

void merge_rothe(const json& j, RotheConfig& r, int dim) {
  check_keys(j, "rothe", {"dt", "T", "u0", "load", "enforce_admissibility", "solver"});
  if (j.contains("dt")) r.dt = j["dt"].get<double>();
  if (j.contains("T")) r.T = j["T"].get<double>();
  if (j.contains("u0")) r.u0 = parse_vector(j["u0"], dim, "rothe.u0");
  if (j.contains("load")) r.load = parse_load(j["load"], dim);
  if (j.contains("enforce_admissibility")) {
    r.enforce_admissibility = j["enforce_admissibility"].get<bool>();
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, "rothe.solver", {"tol", "max_iter"});
    if (s.contains("tol")) r.solver.tol = s["tol"].get<double>();
    if (s.contains("max_iter")) r.solver.max_iter = s["max_iter"].get<int>();
  }
}

json rothe_json(const RotheConfig& r) {
  return {{"dt", r.dt},
          {"T", r.T},
          {"u0", vector_json(r.u0)},
          {"load", load_json(r.load)},
          {"enforce_admissibility", r.enforce_admissibility},
          {"solver", {{"tol", r.solver.tol}, {"max_iter", r.solver.max_iter}}}};
}

const char* const kLedgerNames[] = {"theta1", "theta2", "C_B",    "C_H1",  "C_H3",
                                    "C_H4",   "C_reg",  "C_phi1", "C_phi2"};

LedgerEntry& ledger_field(ConstantsLedger& l, const std::string& name) {
  if (name == "theta1") return l.theta1;
  if (name == "theta2") return l.theta2;
  if (name == "C_B") return l.C_B;
  if (name == "C_H1") return l.C_H1;
  if (name == "C_H3") return l.C_H3;
  if (name == "C_H4") return l.C_H4;
  if (name == "C_reg") return l.C_reg;
  if (name == "C_phi1") return l.C_phi1;
  return l.C_phi2;
}

// A ledger entry is a number (configured) or {"value", "provenance"}.
LedgerEntry parse_entry(const json& j) {
  if (j.is_number()) return {j.get<double>(), Provenance::kConfigured};
  check_keys(j, "constants entry", {"value", "provenance"});
  const std::string prov = j.value("provenance", "configured");
  require(prov == "configured" || prov == "estimated",
          "constants entry: provenance must be configured or estimated");
  return {j.at("value").get<double>(),
          prov == "estimated" ? Provenance::kEstimated : Provenance::kConfigured};
}

void merge_constants(const json& j, RunConfig& c) {
  std::set<std::string> keys{"mode", "samples", "seed", "M_override"};
  for (const char* n : kLedgerNames) keys.insert(n);
  check_keys(j, "constants", keys);
  if (j.contains("mode")) {
    c.constants.mode = j["mode"].get<std::string>();
    require(c.constants.mode == "configured" || c.constants.mode == "estimate",
            "constants.mode: expected configured or estimate");
  }
  if (j.contains("samples")) c.constants.samples = j["samples"].get<int>();
  if (j.contains("seed")) c.constants.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("M_override")) {
    c.problem.ledger.M_override =
        j["M_override"].is_null() ? std::nullopt
                                  : std::optional<double>(j["M_override"].get<double>());
  }
  for (const char* n : kLedgerNames) {
    if (j.contains(n)) ledger_field(c.problem.ledger, n) = parse_entry(j[n]);
  }
}

json constants_json(const RunConfig& c) {
  json j{{"mode", c.constants.mode},
         {"samples", c.constants.samples},
         {"seed", c.constants.seed}};
  j["M_override"] = c.problem.ledger.M_override ? json(*c.problem.ledger.M_override)
                                                : json(nullptr);
  ConstantsLedger ledger = c.problem.ledger;
  for (const char* n : kLedgerNames) {
    const LedgerEntry& e = ledger_field(ledger, n);
    j[n] = e.provenance == Provenance::kConfigured
               ? json(e.value)
               : json{{"value", e.value}, {"provenance", "estimated"}};
  }
  return j;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  check_keys(doc, "config",
             {"preset", "problem", "rothe", "constants", "study", "checks", "output_dir"});
  RunConfig c;
  require(doc.contains("problem"), "config: missing 'problem'");
  const json& problem = doc["problem"];
  if (problem.is_string()) {
    const Preset p = preset(problem.get<std::string>());
    c.preset = p.name;
    c.problem = p.spec;
    c.rothe = p.config;
    c.study_dts = p.study_dts;
    // Only presets built around time regularity opt into the Lipschitz check
    // under the "all" suite; elsewhere the list would be arbitrary.
    if (p.name.rfind("lipschitz_", 0) == 0) c.checks.lipschitz_dts = p.study_dts;
  } else {
    merge_problem(problem, c.problem);
    if (doc.contains("preset")) c.preset = doc["preset"].get<std::string>();
  }
  const int dim = spec_dim(c.problem);
  if (c.rothe.u0.size() != dim) c.rothe.u0 = Vector::Zero(dim);
  if (c.rothe.load.dim() != dim) c.rothe.load = Load::constant(Vector::Zero(dim));

  if (doc.contains("rothe")) merge_rothe(doc["rothe"], c.rothe, dim);
  if (doc.contains("constants")) merge_constants(doc["constants"], c);
  if (doc.contains("study")) {
    check_keys(doc["study"], "study", {"dts"});
    if (doc["study"].contains("dts")) {
      c.study_dts = doc["study"]["dts"].get<std::vector<double>>();
    }
  }
  if (doc.contains("checks")) {
    const json& k = doc["checks"];
    check_keys(k, "checks", {"suite", "tolerance", "delta", "lipschitz_dts"});
    if (k.contains("suite")) c.checks.suite = k["suite"].get<std::string>();
    if (k.contains("tolerance")) c.checks.tolerance = k["tolerance"].get<double>();
    if (k.contains("delta")) c.checks.delta = k["delta"].get<double>();
    if (k.contains("lipschitz_dts")) {
      c.checks.lipschitz_dts = k["lipschitz_dts"].get<std::vector<double>>();
    }
  }
  if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
  c.problem.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["problem"] = problem_json(c.problem);
  j["rothe"] = rothe_json(c.rothe);
  j["constants"] = constants_json(c);
  j["study"] = {{"dts", c.study_dts}};
  j["checks"] = {{"suite", c.checks.suite},
                 {"tolerance", c.checks.tolerance},
                 {"delta", c.checks.delta},
                 {"lipschitz_dts", c.checks.lipschitz_dts}};
  j["output_dir"] = c.output_dir;
  return j;
}

RunConfig load_config(const std::string& path) {
  namespace fs = std::filesystem;
  for (const fs::path& candidate : {fs::path(path), fs::path(path + ".json")}) {
    if (fs::is_regular_file(candidate)) {
      std::ifstream in(candidate);
      require(static_cast<bool>(in), "cannot open config file " + candidate.string());
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ContractError("config file " + candidate.string() +
                            " is not valid JSON: " + e.what());
      }
      return config_from_json(doc);
    }
  }
  // presets/<name> without a file on disk names a built-in preset.
  const std::string name = fs::path(path).filename().string();
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) {
    return config_from_json(json{{"problem", name}});
  }
  throw ContractError("config file not found: " + path);
}

}  // namespace rothevi::cli
