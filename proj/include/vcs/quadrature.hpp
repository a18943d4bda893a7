#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace vcs {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  // weights * e^{node} for the Laguerre rule (elsewhere equal to weights):
  // integrate a decaying f over [0,inf) as sum scaled_weights(i) f(node(i)),
  // with no explicit large exponentials.
  Eigen::VectorXd scaled_weights;
};

namespace detail {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the
// orthogonal-polynomial recurrence, weights mu0 * (first eigenvector
// component)^2. Eigen's tridiagonal solver returns them sorted.
inline QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                                   double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, offdiag);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("quadrature: tridiagonal eigensolve failed");
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  rule.scaled_weights = rule.weights;
  return rule;
}

// Laguerre polynomial evaluation with running rescale so that L_k up to
// |x|^k/k! never overflows; only log|L_n| and the scale-free Newton ratio
// L_n/L_n' are exposed.
struct LaguerreEval {
  double log_abs;      // ln |L_n(x)|
  double newton_step;  // L_n(x)/L_n'(x)
};

inline LaguerreEval laguerre_eval(int n, double x) {
  double prev = 1.0;      // L_0
  double cur = 1.0 - x;   // L_1
  double log_scale = 0.0;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > 1e120) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  if (n == 0) return {0.0, std::numeric_limits<double>::infinity()};
  // x L_n'(x) = n (L_n(x) - L_{n-1}(x))
  const double deriv_times_x = n * (cur - prev);
  return {log_scale + std::log(std::abs(cur)), x * cur / deriv_times_x};
}

}  // namespace detail

// Gauss-Laguerre: integrates int_0^inf e^{-r} f(r) dr exactly for f
// polynomial of degree <= 2n-1. Eigenvalues of the Jacobi matrix
// (a_k = 2k+1, b_k = k) seed Newton iteration on L_n(r) = 0; weights come
// from w_i = r_i / ((n+1) L_{n+1}(r_i))^2 evaluated in log space, which
// keeps the scaled weights w_i e^{r_i} accurate at every node (the raw
// eigenvector weights lose all relative accuracy once w_i drops near
// machine-epsilon squared).
inline QuadratureRule gauss_laguerre(int npts) {
  if (npts < 1) throw std::invalid_argument("gauss_laguerre: need at least one point");
  if (npts > 170) throw std::invalid_argument("gauss_laguerre: order beyond double-precision range");
  Eigen::VectorXd diag(npts), offdiag(npts - 1);
  for (int k = 0; k < npts; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < npts; ++k) offdiag(k - 1) = k;
  QuadratureRule rule = detail::golub_welsch(diag, offdiag, 1.0);

  for (int i = 0; i < npts; ++i) {
    double r = rule.nodes(i);
    for (int it = 0; it < 6; ++it) {
      const double step = detail::laguerre_eval(npts, r).newton_step;
      r -= step;
      if (std::abs(step) <= 1e-15 * r) break;
    }
    rule.nodes(i) = r;
    if (rule.weights(i) > 1e-8) {
      // eigenvector weight is exact to machine precision at this size
      rule.scaled_weights(i) = rule.weights(i) * std::exp(r);
    } else {
      const double log_next = detail::laguerre_eval(npts + 1, r).log_abs;
      const double log_scaled = r + std::log(r) - 2.0 * (std::log(npts + 1.0) + log_next);
      rule.scaled_weights(i) = std::exp(log_scaled);
      rule.weights(i) = std::exp(log_scaled - r);
    }
  }
  return rule;
}

// Gauss-Legendre on [a, b]: exact for polynomials of degree <= 2n-1.
inline QuadratureRule gauss_legendre(int npts, double a, double b) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(npts);
  Eigen::VectorXd offdiag(npts - 1);
  for (int k = 1; k < npts; ++k) offdiag(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  QuadratureRule rule = detail::golub_welsch(diag, offdiag, 2.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  rule.nodes = (mid + half * rule.nodes.array()).matrix();
  rule.weights *= half;
  return rule;
}

enum class RadialRule { GaussLaguerreOnRSubstitution, GaussLegendreTruncated };

struct QuadratureSpec {
  RadialRule radial_rule = RadialRule::GaussLaguerreOnRSubstitution;
  int radial_points = 64;
  int angular_points = 64;
  double t_cutoff = 0.0;  // used by the truncated rule only

  void validate() const {
    if (radial_points < 1 || angular_points < 1)
      throw std::invalid_argument("quadrature spec: point counts must be >= 1");
    if (radial_rule == RadialRule::GaussLaguerreOnRSubstitution && radial_points > 170)
      throw std::invalid_argument("quadrature spec: Laguerre order beyond double range");
    if (radial_rule == RadialRule::GaussLegendreTruncated && !(t_cutoff > 0.0))
      throw std::invalid_argument("quadrature spec: truncated rule requires t_cutoff > 0");
  }
};

}  // namespace vcs
