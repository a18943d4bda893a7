#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vcs/moments.hpp"
#include "vcs/quadrature.hpp"
#include "vcs/states.hpp"

namespace vcs {

// Label families the identity-resolution checks run over. Scalar is the
// n = 1 reduction where the matrix label degenerates to t e^{i theta}.
enum class LabelFamily { Quaternion, OctonionLeft, OctonionRight, Scalar };

inline int family_dim(LabelFamily f) {
  switch (f) {
    case LabelFamily::Quaternion: return 4;
    case LabelFamily::OctonionLeft:
    case LabelFamily::OctonionRight: return 8;
    case LabelFamily::Scalar: return 1;
  }
  throw std::invalid_argument("family_dim: unknown family");
}

inline const char* family_name(LabelFamily f) {
  switch (f) {
    case LabelFamily::Quaternion: return "quaternion";
    case LabelFamily::OctonionLeft: return "octonion-left";
    case LabelFamily::OctonionRight: return "octonion-right";
    case LabelFamily::Scalar: return "scalar";
  }
  return "?";
}

struct VerificationReport {
  std::string check_name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // always residual <= tolerance
  QuadratureSpec quadrature{};
  int truncation_M = 0;
  double tail_bound = 0.0;         // normalized series-tail estimate, 0 when not applicable
  double spectral_estimate = 0.0;  // power-iteration norm of the defect, 0 when not applicable
};

inline VerificationReport make_report(std::string name, double residual, double tolerance,
                                      const QuadratureSpec& quad, int M, double tail = 0.0,
                                      double spectral = 0.0) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.residual = residual;
  r.tolerance = tolerance;
  r.passed = residual <= tolerance;
  r.quadrature = quad;
  r.truncation_M = M;
  r.tail_bound = tail;
  r.spectral_estimate = spectral;
  return r;
}

// Deterministic in-library randomness for audits and norm estimates.
class AuditRng {
 public:
  explicit AuditRng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  Eigen::VectorXd vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = symmetric();
    return v;
  }
  AlgebraElement element(Algebra tag) {
    return AlgebraElement(tag, vector(algebra_dim(tag)));
  }

 private:
  std::mt19937_64 gen_;
};

// Largest-|eigenvalue| estimate of a Hermitian matrix by power iteration,
// deterministic through the seeded start vector.
inline double spectral_norm_estimate(const Eigen::MatrixXcd& m, std::uint64_t seed = 7,
                                     int iterations = 60) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral estimate: matrix not square");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 0.0;
  AuditRng rng(seed);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = std::complex<double>(rng.symmetric(), rng.symmetric());
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXcd w = m * v;
    estimate = w.norm();
    if (estimate < 1e-300) return 0.0;
    v = w / estimate;
  }
  return estimate;
}

namespace detail {

// Radial nodes (t_i, w_i) approximating integrals of the form
// int f(t) t dt over the radial label range.
struct RadialGrid {
  std::vector<double> t;
  std::vector<double> w_tdt;
};

inline RadialGrid radial_grid(const QuadratureSpec& quad) {
  quad.validate();
  RadialGrid g;
  if (quad.radial_rule == RadialRule::GaussLaguerreOnRSubstitution) {
    QuadratureRule rule = gauss_laguerre(quad.radial_points);
    for (int i = 0; i < quad.radial_points; ++i) {
      g.t.push_back(std::sqrt(rule.nodes(i)));
      g.w_tdt.push_back(0.5 * rule.scaled_weights(i));
    }
  } else {
    QuadratureRule rule = gauss_legendre(quad.radial_points, 0.0, quad.t_cutoff);
    for (int i = 0; i < quad.radial_points; ++i) {
      g.t.push_back(rule.nodes(i));
      g.w_tdt.push_back(rule.weights(i) * rule.nodes(i));
    }
  }
  return g;
}

inline void require_theta_grid(int theta_grid, int M, const char* where) {
  if (theta_grid < 2 * M + 2)
    throw std::invalid_argument(std::string(where) +
                                ": theta grid too coarse, cross terms between Fock levels would "
                                "alias; need at least 2M+2 nodes");
}

// Unit direction vector for the element label; empty input selects the
// all-ones direction.
inline Eigen::VectorXd direction_for(int n, const Eigen::VectorXd& direction) {
  if (direction.size() == 0)
    return Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (direction.size() != n)
    throw std::invalid_argument("direction vector length does not match the family dimension");
  const double nrm = direction.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("direction vector must be nonzero");
  return direction / nrm;
}

// Representation of t * x_hat with phase theta for the given family.
inline RepMatrix label_matrix(LabelFamily family, const Eigen::VectorXd& x_hat, double t,
                              double theta) {
  if (family == LabelFamily::Scalar) {
    RepMatrix m;
    m.dim = 1;
    m.entries = Eigen::MatrixXcd::Constant(1, 1, t * x_hat(0));
    m.phase = 0.0;
    return apply_phase(m, theta);
  }
  Eigen::VectorXd coeffs = t * x_hat;
  if (family == LabelFamily::Quaternion)
    return apply_phase(quat_to_matrix(AlgebraElement(Algebra::Quaternion, coeffs)), theta);
  AlgebraElement a(Algebra::Octonion, coeffs);
  return apply_phase(family == LabelFamily::OctonionLeft ? oct_left_matrix(a)
                                                         : oct_right_matrix(a),
                     theta);
}

// Shared assembly: B = sum over nodes of scale * sum_j |s><s|, with
// builder(t, theta, j) producing the state and scale(node, norm_factor)
// the measure weight. Returns B.
template <typename Builder, typename Scale>
Eigen::MatrixXcd assemble_identity_operator(int n, int M, const RadialGrid& grid, int theta_grid,
                                            Builder&& builder, Scale&& scale) {
  const int dim = n * (M + 1);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < grid.t.size(); ++i) {
    // collect the n states of this node as columns, then one rank-n update
    Eigen::MatrixXcd cols(dim, n);
    for (int k = 0; k < theta_grid; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / theta_grid;
      double norm_factor = 0.0;
      for (int j = 1; j <= n; ++j) {
        VcsState s = builder(grid.t[i], theta, j);
        norm_factor = s.meta.norm_factor;
        cols.col(j - 1) = s.flatten();
      }
      b.noalias() += scale(i, norm_factor) * (cols * cols.adjoint());
    }
  }
  return b;
}

inline VerificationReport identity_report(std::string name, const Eigen::MatrixXcd& b,
                                          double tolerance, const QuadratureSpec& quad, int M) {
  Eigen::MatrixXcd defect = b - Eigen::MatrixXcd::Identity(b.rows(), b.cols());
  const double residual = defect.cwiseAbs().maxCoeff();
  const double spectral = spectral_norm_estimate(defect);
  return make_report(std::move(name), residual, tolerance, quad, M, 0.0, spectral);
}

}  // namespace detail

// Resolution of the identity for the series family: assembles
// B = sum_i sum_k (w_i lambda(t_i) N(t_i) / N_theta) sum_j |s_ij_k><s_ij_k|
// over radial Gauss nodes x uniform theta nodes and reports the max-abs
// distance from the identity on C^n (x) H_M. The direction of the element
// is held fixed across the grid; pass an explicit direction to vary it.
inline VerificationReport resolve_identity_series(LabelFamily family, const RhoSequence& rho,
                                                  const DensityFunction& lambda,
                                                  const QuadratureSpec& quad, int M,
                                                  int theta_grid, double tolerance = 1e-8,
                                                  const Eigen::VectorXd& direction = {}) {
  const int n = family_dim(family);
  if (theta_grid <= 0) theta_grid = quad.angular_points;
  detail::require_theta_grid(theta_grid, M, "resolve_identity_series");
  if (M > rho.m_max()) throw std::invalid_argument("resolve_identity_series: M out of rho range");

  const Eigen::VectorXd x_hat = detail::direction_for(n, direction);
  detail::RadialGrid grid = detail::radial_grid(quad);

  std::vector<double> density(grid.t.size());
  for (std::size_t i = 0; i < grid.t.size(); ++i) density[i] = lambda(grid.t[i]);

  auto builder = [&](double t, double theta, int j) {
    return build_series_vcs(detail::label_matrix(family, x_hat, t, theta), rho, j, M);
  };
  auto scale = [&](std::size_t i, double norm_factor) {
    return grid.w_tdt[i] * density[i] * norm_factor / theta_grid;
  };
  Eigen::MatrixXcd b =
      detail::assemble_identity_operator(n, M, grid, theta_grid, builder, scale);
  return detail::identity_report(std::string("identity-resolution-series-") + family_name(family),
                                 b, tolerance, quad, M);
}

// Resolution of the identity for the matrix-moment family under the measure
// (n/pi) t dt dtheta; the closed normalization sum of the sequence supplies
// the weight that the state prefactor removed.
inline VerificationReport resolve_identity_matrix_moment(
    LabelFamily family, double x_rot, const QuadratureSpec& quad, int M, double tolerance = 1e-8,
    MomentPlacement placement = MomentPlacement::RLeft, const Eigen::VectorXd& direction = {}) {
  if (family == LabelFamily::Scalar)
    throw std::invalid_argument("resolve_identity_matrix_moment: scalar family has no R(m)");
  const int n = family_dim(family);
  const int theta_grid = quad.angular_points;
  detail::require_theta_grid(theta_grid, M, "resolve_identity_matrix_moment");

  const Eigen::VectorXd x_hat = detail::direction_for(n, direction);
  detail::RadialGrid grid = detail::radial_grid(quad);
  MatrixMomentSequence seq = rotation_moment_sequence(x_rot, n);

  auto builder = [&](double t, double theta, int j) {
    return build_matrix_moment_vcs(detail::label_matrix(family, x_hat, t, theta), seq, j, M,
                                   placement);
  };
  auto scale = [&](std::size_t i, double) { return 2.0 * n * grid.w_tdt[i] / theta_grid; };
  Eigen::MatrixXcd b =
      detail::assemble_identity_operator(n, M, grid, theta_grid, builder, scale);
  return detail::identity_report(
      std::string("identity-resolution-matrix-moment-") + family_name(family), b, tolerance, quad,
      M);
}

// Parameters for the bundled definition checks. prefactor_scale != 1
// injects a deliberately wrong state prefactor, for fault tests.
struct AxiomParams {
  double t = 1.0;
  double theta = 0.0;
  int M = 15;
  QuadratureSpec quad{};
  int theta_grid = 0;  // 0 -> 2M+2
  Eigen::VectorXd direction{};
  double tol_norm = 1e-10;
  double tol_identity = 1e-8;
  double prefactor_scale = 1.0;
};

// Definition checks for a coherent-state family: (a) the component norms
// sum to one (and each equals 1/n), (b) the weighted projector integral
// resolves the identity.
inline std::vector<VerificationReport> check_definition_axioms(LabelFamily family,
                                                               const AxiomParams& params) {
  const int n = family_dim(family);
  const int theta_grid = params.theta_grid > 0 ? params.theta_grid : 2 * params.M + 2;
  detail::require_theta_grid(theta_grid, params.M, "check_definition_axioms");
  const Eigen::VectorXd x_hat = detail::direction_for(n, params.direction);
  RhoSequence rho = canonical_rho(params.M);
  DensityFunction lambda = canonical_density();

  auto build = [&](double t, double theta, int j) {
    VcsState s =
        build_series_vcs(detail::label_matrix(family, x_hat, t, theta), rho, j, params.M);
    if (params.prefactor_scale != 1.0) s.coeffs *= params.prefactor_scale;
    return s;
  };

  std::vector<VerificationReport> reports;
  const double tail = truncation_bound(rho, params.t, params.M) * n /
                      (n * std::exp(params.t * params.t));

  double total = 0.0, worst_component = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double nrm2 = build(params.t, params.theta, j).squared_norm();
    total += nrm2;
    worst_component = std::max(worst_component, std::abs(nrm2 - 1.0 / n));
  }
  reports.push_back(make_report(std::string("normalization-sum-") + family_name(family),
                                std::abs(total - 1.0), params.tol_norm, params.quad, params.M,
                                tail));
  reports.push_back(make_report(std::string("component-norms-") + family_name(family),
                                worst_component, params.tol_norm, params.quad, params.M, tail));

  detail::RadialGrid grid = detail::radial_grid(params.quad);
  auto scale = [&](std::size_t i, double norm_factor) {
    return grid.w_tdt[i] * lambda(grid.t[i]) * norm_factor / theta_grid;
  };
  Eigen::MatrixXcd b =
      detail::assemble_identity_operator(n, params.M, grid, theta_grid, build, scale);
  reports.push_back(detail::identity_report(
      std::string("identity-resolution-") + family_name(family), b, params.tol_identity,
      params.quad, params.M));
  return reports;
}

// Fault injection for the representation audit.
struct AuditFault {
  bool flip_omega_sign = false;  // flips one entry of the left representation
};

// Randomized audit of the representation-layer invariants: the norm
// property of all three matrix families, the transpose identity under
// conjugation, the sign-metric link between the octonion actions, the
// quaternion homomorphism, and the basis anticommutation sweep.
// Deterministic for a fixed (samples, seed).
inline std::vector<VerificationReport> representation_audit(int samples, std::uint64_t seed,
                                                            const AuditFault& fault = {}) {
  if (samples < 1) throw std::invalid_argument("representation_audit: samples must be >= 1");
  AuditRng rng(seed);
  const double tol = 1e-12;
  QuadratureSpec no_quad{};

  auto left_matrix = [&](const AlgebraElement& a) {
    RepMatrix m = oct_left_matrix(a);
    if (fault.flip_omega_sign) m.entries(1, 2) = -m.entries(1, 2);
    return m;
  };

  double norm_quat = 0.0, norm_oct_left = 0.0, norm_oct_right = 0.0;
  double link = 0.0, conj_transpose = 0.0, homomorphism = 0.0, left_action = 0.0;
  const Eigen::MatrixXcd k8 = k8_metric().entries;

  // the zero element satisfies the norm property trivially; keep it in the
  // sample set so the degenerate case is always exercised
  std::vector<AlgebraElement> quats{AlgebraElement::zero(Algebra::Quaternion)};
  std::vector<AlgebraElement> octs{AlgebraElement::zero(Algebra::Octonion)};
  for (int s = 1; s < samples; ++s) {
    quats.push_back(rng.element(Algebra::Quaternion));
    octs.push_back(rng.element(Algebra::Octonion));
  }

  for (const auto& q : quats) {
    Eigen::MatrixXcd m = quat_to_matrix(q).entries;
    Eigen::MatrixXcd gram = m * m.transpose();
    norm_quat = std::max(
        norm_quat,
        (gram - q.squared_norm() * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff());
  }
  for (const auto& a : octs) {
    Eigen::MatrixXcd om = left_matrix(a).entries;
    Eigen::MatrixXcd nu = oct_right_matrix(a).entries;
    const double a2 = a.squared_norm();
    norm_oct_left = std::max(
        norm_oct_left,
        (om * om.transpose() - a2 * Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff());
    norm_oct_right = std::max(
        norm_oct_right,
        (nu * nu.transpose() - a2 * Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff());
    link = std::max(link, (nu - k8 * om.transpose() * k8).cwiseAbs().maxCoeff());
    conj_transpose = std::max(
        conj_transpose,
        (left_matrix(conjugate(a)).entries - om.transpose()).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i + 1 < quats.size(); ++i) {
    const auto& a = quats[i];
    const auto& b = quats[i + 1];
    Eigen::MatrixXcd lhs = quat_to_matrix(cd_multiply(a, b)).entries;
    Eigen::MatrixXcd rhs = quat_to_matrix(a).entries * quat_to_matrix(b).entries;
    homomorphism = std::max(homomorphism, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i + 1 < octs.size(); ++i) {
    const auto& a = octs[i];
    const auto& b = octs[i + 1];
    Eigen::VectorXcd lhs = left_matrix(a).entries * b.coeffs().cast<std::complex<double>>();
    Eigen::VectorXcd rhs = cd_multiply(a, b).coeffs().cast<std::complex<double>>();
    left_action = std::max(left_action, (lhs - rhs).cwiseAbs().maxCoeff());
  }

  // basis sweep: e_a o e_a = -1 (a >= 1), e_a o e_b = -e_b o e_a, unit norm
  double basis_sweep = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      AlgebraElement ea = AlgebraElement::basis(Algebra::Octonion, a);
      AlgebraElement eb = AlgebraElement::basis(Algebra::Octonion, b);
      AlgebraElement ab = cd_multiply(ea, eb);
      basis_sweep = std::max(basis_sweep, std::abs(ab.norm() - 1.0));
      if (a >= 1 && b >= 1) {
        AlgebraElement ba = cd_multiply(eb, ea);
        if (a == b) {
          basis_sweep = std::max(basis_sweep, (ab.coeffs() +
                                               AlgebraElement::basis(Algebra::Octonion, 0).coeffs())
                                                  .cwiseAbs()
                                                  .maxCoeff());
        } else {
          basis_sweep = std::max(basis_sweep, (ab.coeffs() + ba.coeffs()).cwiseAbs().maxCoeff());
        }
      }
    }

  std::vector<VerificationReport> reports;
  auto push = [&](const char* name, double residual) {
    reports.push_back(make_report(name, residual, tol, no_quad, 0));
  };
  push("audit-norm-property-quaternion", norm_quat);
  push("audit-norm-property-octonion-left", norm_oct_left);
  push("audit-norm-property-octonion-right", norm_oct_right);
  push("audit-left-right-link", link);
  push("audit-conjugation-transpose", conj_transpose);
  push("audit-quaternion-homomorphism", homomorphism);
  push("audit-left-action", left_action);
  push("audit-basis-anticommutation", basis_sweep);
  return reports;
}

inline bool all_passed(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

}  // namespace vcs
