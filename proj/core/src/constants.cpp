#include "rothevi/constants.hpp"

#include <algorithm>
#include <cmath>

#include "rothevi/types.hpp"

namespace rothevi {

const char* to_string(Provenance p) {
  return p == Provenance::kConfigured ? "configured" : "estimated";
}

double young_constant(double C, double theta, double eps) {
  require(eps > 0.0, "young_constants: eps must be positive");
  require(theta >= 1.0, "young_constants: theta must be >= 1");
  require(C >= 0.0, "young_constants: constant must be nonnegative");
  if (C == 0.0) return 0.0;
  if (theta == 1.0) return C;
  return std::pow(C, theta) / theta *
         std::pow((1.0 - 1.0 / theta) / eps, theta - 1.0);
}

YoungConstants young_constants(const ConstantsLedger& ledger, double eps) {
  require(eps > 0.0, "young_constants: eps must be positive");
  return {young_constant(ledger.C_H1.value, ledger.theta1.value, eps),
          young_constant(ledger.C_H4.value, ledger.theta2.value, eps)};
}

double ConstantsLedger::C_phi3() const {
  return 4.0 * C_phi1.value * (C_phi1.value + 1.0);
}

double ConstantsLedger::M() const {
  if (M_override) return *M_override;
  const double creg = C_reg.value;
  const double a =
      young_constant(C_H4.value, theta2.value, 1.0 / (16.0 * creg));
  const double b = young_constant(C_H4.value, theta2.value, 1.0 / (2.0 * creg));
  const double nonlinear = 8.0 * a * a + b * b / 2.0;
  const double offset = C_phi2.value * C_phi2.value / (2.0 * creg * creg);
  return std::max({4.5, nonlinear, offset});
}

double ConstantsLedger::M_prime() const {
  return std::pow(2.0, theta2.value + 1.0) * M();
}

double ConstantsLedger::C_theta1_quarter() const {
  return young_constant(C_H1.value, theta1.value, 0.25);
}

void ConstantsLedger::validate() const {
  require(theta1.value >= 2.0, "ConstantsLedger: theta1 must be >= 2");
  require(theta2.value >= 1.0, "ConstantsLedger: theta2 must be >= 1");
  require(C_reg.value > 0.0, "ConstantsLedger: C_reg must be positive");
  for (const auto* e : {&C_B, &C_H1, &C_H3, &C_H4, &C_phi1, &C_phi2}) {
    require(std::isfinite(e->value) && e->value >= 0.0,
            "ConstantsLedger: constants must be finite and nonnegative");
  }
}

std::vector<ConstantsLedger::Row> ConstantsLedger::rows() const {
  auto stored = [](const char* name, const LedgerEntry& e) {
    return Row{name, e.value, to_string(e.provenance)};
  };
  std::vector<Row> out{stored("theta1", theta1), stored("theta2", theta2),
                       stored("C_B", C_B),       stored("C_H1", C_H1),
                       stored("C_H3", C_H3),     stored("C_H4", C_H4),
                       stored("C_reg", C_reg),   stored("C_phi1", C_phi1),
                       stored("C_phi2", C_phi2)};
  const char* derived = "derived";
  out.push_back({"C_phi3", C_phi3(), derived});
  out.push_back({"C_theta1_quarter", C_theta1_quarter(), derived});
  out.push_back({"M", M(), M_override ? "configured" : derived});
  out.push_back({"M_prime", M_prime(), derived});
  if (beta) out.push_back({"beta", *beta, derived});
  return out;
}

}  // namespace rothevi
