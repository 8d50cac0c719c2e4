#include "rothevi/load.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rothevi {

namespace {

// 5-point Gauss–Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915,
    0.5688888888888888888888889, 0.4786286704993664680412915,
    0.2369268850561890875142640};

template <typename T, typename Fn>
T gauss5(double t0, double t1, Fn&& fn) {
  const double half = 0.5 * (t1 - t0);
  const double mid = 0.5 * (t0 + t1);
  T acc = fn(mid + half * kGaussNodes[0]) * kGaussWeights[0];
  for (std::size_t k = 1; k < kGaussNodes.size(); ++k) {
    acc += fn(mid + half * kGaussNodes[k]) * kGaussWeights[k];
  }
  return T(acc * half);
}

std::size_t table_index(const std::vector<double>& times, double t) {
  // values[k] on [times[k], times[k+1]).
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

void check_stamps(const std::vector<double>& times, std::size_t n_values) {
  require(!times.empty(), "table load: needs at least one time stamp");
  require(times.size() == n_values,
          "table load: times and values differ in length");
  require(std::is_sorted(times.begin(), times.end()) &&
              std::adjacent_find(times.begin(), times.end()) == times.end(),
          "table load: time stamps must be strictly increasing");
}

}  // namespace

TemporalProfile TemporalProfile::constant(double value) {
  TemporalProfile p;
  p.kind_ = Kind::kConst;
  p.a_ = value;
  return p;
}

TemporalProfile TemporalProfile::linear(double a, double b) {
  TemporalProfile p;
  p.kind_ = Kind::kLinear;
  p.a_ = a;
  p.b_ = b;
  return p;
}

TemporalProfile TemporalProfile::sine(double amplitude, double omega,
                                      double offset) {
  TemporalProfile p;
  p.kind_ = Kind::kSine;
  p.a_ = offset;
  p.b_ = amplitude;
  p.omega_ = omega;
  return p;
}

TemporalProfile TemporalProfile::table(std::vector<double> times,
                                       std::vector<double> values) {
  check_stamps(times, values.size());
  TemporalProfile p;
  p.kind_ = Kind::kTable;
  p.times_ = std::move(times);
  p.values_ = std::move(values);
  return p;
}

TemporalProfile TemporalProfile::custom(std::function<double(double)> fn) {
  require(static_cast<bool>(fn), "custom profile: empty function");
  TemporalProfile p;
  p.kind_ = Kind::kCustom;
  p.fn_ = std::move(fn);
  return p;
}

double TemporalProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::kConst:
      return a_;
    case Kind::kLinear:
      return a_ + b_ * t;
    case Kind::kSine:
      return a_ + b_ * std::sin(omega_ * t);
    case Kind::kTable:
      return values_[table_index(times_, t)];
    case Kind::kCustom:
      return fn_(t);
  }
  return 0.0;
}

Load Load::constant(Vector values) {
  require(values.size() > 0, "constant load: empty vector");
  Load l;
  l.kind_ = Kind::kConstant;
  l.spatial_ = std::move(values);
  return l;
}

Load Load::separable(Vector spatial, TemporalProfile profile) {
  require(spatial.size() > 0, "separable load: empty spatial vector");
  Load l;
  l.kind_ = Kind::kSeparable;
  l.spatial_ = std::move(spatial);
  l.profile_ = std::move(profile);
  return l;
}

Load Load::tabulated(std::vector<double> times, std::vector<Vector> values) {
  check_stamps(times, values.size());
  for (const auto& v : values) {
    require(v.size() == values.front().size() && v.size() > 0,
            "tabulated load: inconsistent vector lengths");
  }
  Load l;
  l.kind_ = Kind::kTabulated;
  l.times_ = std::move(times);
  l.values_ = std::move(values);
  return l;
}

int Load::dim() const {
  if (kind_ == Kind::kTabulated) return static_cast<int>(values_[0].size());
  return static_cast<int>(spatial_.size());
}

Vector Load::at(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return spatial_;
    case Kind::kSeparable:
      return spatial_ * profile_(t);
    case Kind::kTabulated:
      return values_[table_index(times_, t)];
  }
  return {};
}

bool Load::piecewise_constant() const {
  return kind_ != Kind::kSeparable || profile_.piecewise_constant();
}

std::vector<double> Load::breakpoints(double t0, double t1) const {
  std::vector<double> pts{t0};
  const std::vector<double>* stamps = nullptr;
  if (kind_ == Kind::kTabulated) stamps = &times_;
  if (kind_ == Kind::kSeparable && profile_.kind() == TemporalProfile::Kind::kTable) {
    stamps = &profile_.times();
  }
  if (stamps) {
    for (double s : *stamps) {
      if (s > t0 && s < t1) pts.push_back(s);
    }
  }
  pts.push_back(t1);
  return pts;
}

Vector Load::mean(double t0, double t1) const {
  require(t1 > t0, "Load::mean: empty interval");
  if (kind_ == Kind::kConstant) return spatial_;
  const auto pts = breakpoints(t0, t1);
  Vector acc = Vector::Zero(dim());
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k];
    const double b = pts[k + 1];
    if (piecewise_constant()) {
      acc += (b - a) * at(0.5 * (a + b));
    } else {
      acc += gauss5<Vector>(a, b, [&](double t) -> Vector { return at(t); });
    }
  }
  return acc / (t1 - t0);
}

double Load::h_norm_sq_integral(const DiscreteGelfand& g, double t0,
                                double t1) const {
  require_dim(dim(), g.dim(), "load dimension");
  require(t1 >= t0, "Load::h_norm_sq_integral: reversed interval");
  if (t1 == t0) return 0.0;
  const auto pts = breakpoints(t0, t1);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k];
    const double b = pts[k + 1];
    auto sq = [&](double t) {
      const Vector f = at(t);
      return g.h_inner(f, f);
    };
    acc += piecewise_constant() ? (b - a) * sq(0.5 * (a + b))
                                : gauss5<double>(a, b, sq);
  }
  return acc;
}

Vector average_load(const Load& load, int n, double dt) {
  require(n >= 1, "average_load: step index must be >= 1");
  require(dt > 0.0, "average_load: dt must be positive");
  return load.mean((n - 1) * dt, n * dt);
}

}  // namespace rothevi
