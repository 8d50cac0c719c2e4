#pragma once

#include <string>
#include <vector>

#include "rothevi/rothe.hpp"

namespace rothevi {

enum class ProblemKind {
  kObstacleCd1d,
  kObstacleCd2d,
  kFrictionNeumann1d,
  /// Matrices, functional and convection tensor given verbatim.
  kExplicit,
};

const char* to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kObstacleCd1d;
  /// Nodes per dimension: interior nodes for the obstacle kinds, all nodes
  /// (boundary included) for the friction kind.
  int resolution = 31;
  Interval x_domain;
  Interval y_domain;
  /// Convection coefficient c; the transport velocity at node i is c·wᵢ.
  std::vector<double> convection{0.0};
  double diffusion = 1.0;
  double obstacle_level = 0.0;
  /// Friction weights at the left and right boundary nodes.
  double friction_left = 1.0;
  double friction_right = 1.0;
  /// Reaction ε₀ added to the Neumann stiffness.
  double reaction = 1.0;

  // kExplicit only.
  DenseMatrix mass;
  DenseMatrix stiffness;
  FunctionalKind functional = FunctionalKind::kZero;
  Vector functional_data;
  std::vector<ConvectionEntry> convection_entries;

  ConstantsLedger ledger;

  void validate() const;
};

/// Assembles the discrete problem. Obstacle kinds use a lumped mass, the
/// central Dirichlet stiffness and first-order upwind convection; the
/// friction kind uses the Neumann P1 stiffness plus ε₀·M with weights on the
/// two boundary nodes. The upwind operator keeps the M-matrix sign pattern
/// only for nonnegative weight vectors w.
Problem build(const ProblemSpec& spec);

/// Node coordinates, one row per unknown (1 or 2 columns).
DenseMatrix node_coordinates(const ProblemSpec& spec);

struct Preset {
  std::string name;
  ProblemSpec spec;
  RotheConfig config;
  /// Step sizes for refinement studies (each half the previous).
  std::vector<double> study_dts;
};

/// Names accepted by preset(), in documentation order.
const std::vector<std::string>& preset_names();

/// Deterministic fully specified instance. Throws ContractError listing the
/// valid names for an unknown one.
Preset preset(const std::string& name);

}  // namespace rothevi
