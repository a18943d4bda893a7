#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vcs/quadrature.hpp"
#include "vcs/rho.hpp"

namespace vcs {

struct MomentCheck {
  int m;
  double integral;
  double target;
  double relative_error;
  bool converged;  // stable under halving the quadrature order
};

namespace detail {

// int_0^L lambda(t) t^{2m+1} dt under the given radial rule. The Laguerre
// route substitutes r = t^2, giving (1/2) int_0^inf e^{-r} [e^r lambda(sqrt r)] r^m dr;
// for lambda proportional to e^{-t^2} the bracket is constant and the rule
// is exact up to rounding.
inline double radial_moment(const DensityFunction& lambda, int m, const QuadratureSpec& spec) {
  double acc = 0.0;
  if (spec.radial_rule == RadialRule::GaussLaguerreOnRSubstitution) {
    QuadratureRule rule = gauss_laguerre(spec.radial_points);
    for (int i = 0; i < rule.nodes.size(); ++i) {
      const double r = rule.nodes(i);
      const double lam = lambda(std::sqrt(r));
      if (lam < 0.0) throw std::domain_error("moment integral: negative density sample");
      acc += 0.5 * rule.scaled_weights(i) * lam * std::pow(r, m);
    }
  } else {
    QuadratureRule rule = gauss_legendre(spec.radial_points, 0.0, spec.t_cutoff);
    for (int i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes(i);
      const double lam = lambda(t);
      if (lam < 0.0) throw std::domain_error("moment integral: negative density sample");
      acc += rule.weights(i) * lam * std::pow(t, 2 * m + 1);
    }
  }
  return acc;
}

}  // namespace detail

// Checks the moment condition int_0^L lambda(t) t^{2m+1} dt = x_m! for
// m = 0..m_max. Each row carries the computed integral, the target, the
// relative error, and a convergence flag comparing against a halved rule.
inline std::vector<MomentCheck> verify_moments(const DensityFunction& lambda,
                                               const RhoSequence& rho, int m_max,
                                               const QuadratureSpec& spec) {
  if (m_max < 0) throw std::invalid_argument("verify_moments: m_max must be >= 0");
  if (m_max > rho.m_max()) throw std::invalid_argument("verify_moments: m_max exceeds rho table");
  spec.validate();
  if (2 * spec.radial_points - 1 < m_max)
    throw std::invalid_argument("verify_moments: quadrature order too low for requested degree");

  QuadratureSpec half = spec;
  half.radial_points = std::max(spec.radial_points / 2, (m_max + 2) / 2 + 1);

  std::vector<MomentCheck> out;
  out.reserve(static_cast<size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    const double integral = detail::radial_moment(lambda, m, spec);
    const double coarse = detail::radial_moment(lambda, m, half);
    const double target = rho.factorial(m);
    const double rel = std::abs(integral - target) / std::max(std::abs(target), 1e-300);
    const bool converged =
        std::abs(integral - coarse) <= 1e-10 * std::max(1.0, std::abs(integral));
    out.push_back({m, integral, target, rel, converged});
  }
  return out;
}

// Partial sum N(t) = n * sum_{m<=M} t^{2m}/x_m!; nondecreasing in M and,
// for the canonical sequence, bounded by n e^{t^2}.
inline double normalization_factor(const RhoSequence& rho, int n, double t, int M) {
  if (n < 1) throw std::invalid_argument("normalization_factor: n must be >= 1");
  if (!(t >= 0.0)) throw std::invalid_argument("normalization_factor: t must be >= 0");
  if (t >= rho.label_radius())
    throw std::domain_error("normalization_factor: t outside the label set");
  if (M < 0 || M > rho.m_max())
    throw std::invalid_argument("normalization_factor: M out of range");
  double sum = 0.0, term = 1.0;
  const double t2 = t * t;
  for (int m = 0; m <= M; ++m) {
    if (m > 0) term *= t2 / rho.x(m);
    sum += term;
  }
  return n * sum;
}

// Tail bound sum_{m>M} t^{2m}/m! <= t^{2(M+1)}/(M+1)! * e^{t^2}, specific to
// the canonical sequence.
inline double truncation_bound(const RhoSequence& rho, double t, int M) {
  if (rho.kind() != RhoKind::CanonicalFactorial)
    throw std::invalid_argument("truncation_bound: only defined for the factorial sequence");
  if (!(t >= 0.0)) throw std::invalid_argument("truncation_bound: t must be >= 0");
  if (M < 0) throw std::invalid_argument("truncation_bound: M must be >= 0");
  if (t == 0.0) return 0.0;
  // evaluated in log space to survive large M
  const double log_bound = 2.0 * (M + 1) * std::log(t) - std::lgamma(M + 2.0) + t * t;
  return std::exp(log_bound);
}

// Smallest M with truncation_bound(t, M) <= tol; used to size Fock
// truncations for a target tolerance.
inline int fock_level_for_tolerance(const RhoSequence& rho, double t, double tol, int m_min = 0) {
  if (!(tol > 0.0)) throw std::invalid_argument("fock_level_for_tolerance: tol must be positive");
  for (int M = std::max(m_min, 0); M <= 100000; ++M) {
    if (truncation_bound(rho, t, M) <= tol) return M;
  }
  throw std::runtime_error("fock_level_for_tolerance: no M found below tolerance");
}

// Radial cutoff T such that the mass of lambda(t) t^{2m_max+1} beyond T is
// below 1e-14 of the scale target; supports truncated-rule setups for
// decaying densities.
inline double density_cutoff(const DensityFunction& lambda, int m_max, double scale) {
  if (std::isfinite(lambda.support_upper())) return lambda.support_upper();
  const double floor_mass = 1e-14 * std::max(std::abs(scale), 1e-300);
  double T = 1.0;
  for (int step = 0; step < 200; ++step) {
    QuadratureRule rule = gauss_legendre(32, T, T + 1.0);
    double strip = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
      strip += rule.weights(i) * lambda(rule.nodes(i)) * std::pow(rule.nodes(i), 2 * m_max + 1);
    if (strip < floor_mass) return T + 2.0;
    T += 1.0;
  }
  throw std::runtime_error("density_cutoff: density tail does not decay");
}

}  // namespace vcs
