#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rothevi {

enum class Provenance { kConfigured, kEstimated };

const char* to_string(Provenance p);

struct LedgerEntry {
  double value = 0.0;
  Provenance provenance = Provenance::kConfigured;
};

/// Constants of the structural hypotheses together with the derived
/// quantities of the a priori analysis.
///
///   C_H1  |⟨B(u,v),v⟩| ≤ C ‖u‖_V ‖v‖_V ‖v‖_H^{2/θ1} ‖v‖_V^{1-2/θ1}
///   C_H3  ‖B(u,v)‖_H ≤ C ‖u‖_W ‖v‖_V
///   C_H4  ‖B(u,v)‖_H ≤ C ‖u‖_V ‖v‖_V^{1/θ2} ‖v‖_W^{1-1/θ2}
///   C_reg, C_phi2   ‖u‖_W ≤ C_reg ‖f‖_H + C_phi2 for the stationary problem
struct ConstantsLedger {
  LedgerEntry theta1{4.0};
  LedgerEntry theta2{2.0};
  LedgerEntry C_B{0.0};
  LedgerEntry C_H1{0.0};
  LedgerEntry C_H3{0.0};
  LedgerEntry C_H4{0.0};
  LedgerEntry C_reg{1.0};
  LedgerEntry C_phi1{0.0};
  LedgerEntry C_phi2{0.0};

  /// Replaces the assembled M (negative controls, what-if runs).
  std::optional<double> M_override;
  /// Filled in once compute_beta has run for a concrete datum.
  std::optional<double> beta;

  [[nodiscard]] double C_phi3() const;
  /// max{9/2, 8 C²_{θ2,1/(16 C_reg)} + C²_{θ2,1/(2 C_reg)}/2,
  ///     C²_phi2 / (2 C²_reg)}, unless overridden.
  [[nodiscard]] double M() const;
  [[nodiscard]] double M_prime() const;
  /// C_{θ1,1/4}, the Young constant entering every step-size condition.
  [[nodiscard]] double C_theta1_quarter() const;

  void validate() const;

  struct Row {
    std::string name;
    double value;
    std::string provenance;
  };
  /// Flat listing of all stored and derived entries, for reports.
  [[nodiscard]] std::vector<Row> rows() const;
};

struct YoungConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Weighted Young constant: C a^{1/θ} b^{1-1/θ} ≤ c·a + eps·b with
/// c = (1/θ) C^θ ((1 - 1/θ)/eps)^{θ-1}. θ = 1 degenerates to c = C.
double young_constant(double C, double theta, double eps);

/// (C_{θ1,eps}, C_{θ2,eps}) for the ledger's C_H1 and C_H4 entries.
YoungConstants young_constants(const ConstantsLedger& ledger, double eps);

}  // namespace rothevi
