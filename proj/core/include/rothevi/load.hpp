#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rothevi/gelfand.hpp"

namespace rothevi {

/// Scalar time profile t ↦ p(t) of a separable load.
class TemporalProfile {
 public:
  enum class Kind { kConst, kLinear, kSine, kTable, kCustom };

  static TemporalProfile constant(double value);
  /// a + b t
  static TemporalProfile linear(double a, double b);
  /// offset + amplitude · sin(ω t)
  static TemporalProfile sine(double amplitude, double omega,
                              double offset = 0.0);
  /// Piecewise constant: values[k] on [times[k], times[k+1]); values[0]
  /// before times[0], values.back() after the last stamp.
  static TemporalProfile table(std::vector<double> times,
                               std::vector<double> values);
  /// Arbitrary smooth profile (not serializable).
  static TemporalProfile custom(std::function<double(double)> fn);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] bool piecewise_constant() const {
    return kind_ == Kind::kConst || kind_ == Kind::kTable;
  }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] double omega() const { return omega_; }

 private:
  Kind kind_ = Kind::kConst;
  double a_ = 0.0;
  double b_ = 0.0;
  double omega_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
  std::function<double(double)> fn_;
};

/// Time-dependent H-valued load f(t), given by nodal values.
class Load {
 public:
  enum class Kind { kConstant, kSeparable, kTabulated };

  static Load constant(Vector values);
  static Load separable(Vector spatial, TemporalProfile profile);
  /// Piecewise constant in time with the same stamp semantics as
  /// TemporalProfile::table.
  static Load tabulated(std::vector<double> times, std::vector<Vector> values);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int dim() const;
  [[nodiscard]] Vector at(double t) const;
  /// Exact mean over [t0, t1] for piecewise-constant parts, 5-point
  /// Gauss–Legendre on each smooth piece otherwise.
  [[nodiscard]] Vector mean(double t0, double t1) const;
  /// ∫_{t0}^{t1} ‖f(t)‖²_H dt with the same quadrature rule.
  [[nodiscard]] double h_norm_sq_integral(const DiscreteGelfand& g, double t0,
                                          double t1) const;

  [[nodiscard]] const Vector& spatial() const { return spatial_; }
  [[nodiscard]] const TemporalProfile& profile() const { return profile_; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<Vector>& values() const { return values_; }

 private:
  [[nodiscard]] std::vector<double> breakpoints(double t0, double t1) const;
  [[nodiscard]] bool piecewise_constant() const;

  Kind kind_ = Kind::kConstant;
  Vector spatial_;
  TemporalProfile profile_ = TemporalProfile::constant(1.0);
  std::vector<double> times_;
  std::vector<Vector> values_;
};

/// f^n = (1/Δt) ∫_{(n-1)Δt}^{nΔt} f(t) dt.
Vector average_load(const Load& load, int n, double dt);

}  // namespace rothevi
