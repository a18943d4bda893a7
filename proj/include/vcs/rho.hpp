#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vcs {

enum class RhoKind { CanonicalFactorial, UserTable };

// Positive weight sequence rho(m) defining the generalized factorials
// x_m! = rho(m)/rho(0) with x_m = rho(m)/rho(m-1). The convergence radius
// R = lim x_m bounds the label set radius L = sqrt(R).
class RhoSequence {
 public:
  static RhoSequence canonical(int m_max) {
    if (m_max < 0) throw std::invalid_argument("canonical rho: m_max must be >= 0");
    std::vector<double> v(static_cast<size_t>(m_max) + 1);
    v[0] = 1.0;
    for (int m = 1; m <= m_max; ++m) v[m] = v[m - 1] * m;
    return RhoSequence(RhoKind::CanonicalFactorial, std::move(v),
                       std::numeric_limits<double>::infinity());
  }

  // User tables are normalized by rho(0); the states built from a rho
  // sequence are invariant under overall scaling, and normalizing keeps
  // x_m! = rho(m) exact.
  static RhoSequence from_table(std::vector<double> values,
                                double radius = std::numeric_limits<double>::infinity()) {
    if (values.empty()) throw std::invalid_argument("rho table: at least rho(0) required");
    for (double v : values)
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("rho table: all entries must be positive finite");
    if (!(radius > 0.0)) throw std::invalid_argument("rho table: radius must be positive");
    const double scale = values[0];
    for (double& v : values) v /= scale;
    return RhoSequence(RhoKind::UserTable, std::move(values), radius);
  }

  RhoKind kind() const { return kind_; }
  int m_max() const { return static_cast<int>(values_.size()) - 1; }

  double rho(int m) const {
    check_index(m);
    return values_[static_cast<size_t>(m)];
  }

  // x_m = rho(m)/rho(m-1), defined for m >= 1.
  double x(int m) const {
    if (m < 1) throw std::out_of_range("x_m defined for m >= 1");
    check_index(m);
    return values_[static_cast<size_t>(m)] / values_[static_cast<size_t>(m) - 1];
  }

  // x_m! with x_0! = 1.
  double factorial(int m) const {
    check_index(m);
    return values_[static_cast<size_t>(m)];
  }

  // limit of x_m (infinite for the canonical sequence)
  double radius() const { return radius_; }
  // label set radius L = sqrt(R)
  double label_radius() const { return std::sqrt(radius_); }

 private:
  RhoSequence(RhoKind kind, std::vector<double> values, double radius)
      : kind_(kind), values_(std::move(values)), radius_(radius) {}

  void check_index(int m) const {
    if (m < 0 || m > m_max()) throw std::out_of_range("rho index out of table range");
  }

  RhoKind kind_;
  std::vector<double> values_;
  double radius_;
};

enum class DensityKind { GaussianTimes2, UserDefined };

// Radial density lambda(t) >= 0 on [0, L), the unknown of the moment
// condition int_0^L lambda(t) t^{2m+1} dt = x_m!.
class DensityFunction {
 public:
  static DensityFunction canonical() {
    return DensityFunction(
        DensityKind::GaussianTimes2,
        [](double t) { return 2.0 * std::exp(-t * t); },
        std::numeric_limits<double>::infinity());
  }

  static DensityFunction from_function(std::function<double(double)> fn, double support_upper) {
    if (!fn) throw std::invalid_argument("density: empty function");
    if (!(support_upper > 0.0)) throw std::invalid_argument("density: support must be positive");
    return DensityFunction(DensityKind::UserDefined, std::move(fn), support_upper);
  }

  // piecewise-linear table (t_k, lambda_k); zero beyond the last node
  static DensityFunction from_table(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) throw std::invalid_argument("density table: need at least two nodes");
    for (size_t i = 0; i < table.size(); ++i) {
      if (table[i].second < 0.0)
        throw std::invalid_argument("density table: negative value");
      if (i > 0 && !(table[i].first > table[i - 1].first))
        throw std::invalid_argument("density table: t nodes must increase");
    }
    const double upper = table.back().first;
    auto fn = [table = std::move(table)](double t) {
      if (t <= table.front().first) return table.front().second;
      if (t >= table.back().first) return 0.0;
      size_t hi = 1;
      while (table[hi].first < t) ++hi;
      const auto& [t0, f0] = table[hi - 1];
      const auto& [t1, f1] = table[hi];
      return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
    };
    return DensityFunction(DensityKind::UserDefined, std::move(fn), upper);
  }

  DensityKind kind() const { return kind_; }
  double support_upper() const { return support_upper_; }

  double operator()(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("density evaluated at negative t");
    return eval_(t);
  }

 private:
  DensityFunction(DensityKind kind, std::function<double(double)> eval, double support_upper)
      : kind_(kind), eval_(std::move(eval)), support_upper_(support_upper) {}

  DensityKind kind_;
  std::function<double(double)> eval_;
  double support_upper_;
};

inline RhoSequence canonical_rho(int m_max) { return RhoSequence::canonical(m_max); }
inline DensityFunction canonical_density() { return DensityFunction::canonical(); }

}  // namespace vcs
