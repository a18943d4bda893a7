#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vcs/algebra.hpp"
#include "vcs/fock.hpp"
#include "vcs/moments.hpp"
#include "vcs/representation.hpp"
#include "vcs/rho.hpp"

namespace vcs {

enum class StateFamily { Series, EigenSeries, MatrixMoment, Exponential };

struct StateMeta {
  double t = 0.0;      // |x|, the radial label
  double theta = 0.0;  // phase label
  int j = 0;           // source basis index (1-based; 0 when built from a general vector)
  StateFamily family = StateFamily::Series;
  bool normalized = false;
  double norm_factor = 1.0;  // the N used in the prefactor N^{-1/2}
};

// State on C^n (x) H_M. coeffs(i, m) is the i-th component of the C^n
// vector at Fock level m; flatten() uses the same (j, m) -> j (M+1) + m
// layout as LiftedOperator.
struct VcsState {
  int n = 0;
  int M = 0;
  Eigen::MatrixXcd coeffs;  // n rows, M+1 columns
  StateMeta meta;

  Eigen::VectorXcd flatten() const {
    Eigen::VectorXcd v(n * (M + 1));
    for (int j = 0; j < n; ++j)
      for (int m = 0; m <= M; ++m) v(j * (M + 1) + m) = coeffs(j, m);
    return v;
  }

  double squared_norm() const { return coeffs.squaredNorm(); }
};

namespace detail {

// Normalization N(t) entering the state prefactor: the closed form
// n e^{t^2} when the series is the exponential one, otherwise the partial
// sum up to the working truncation.
inline double series_norm_factor(const RhoSequence& rho, int n, double t, int M) {
  if (rho.kind() == RhoKind::CanonicalFactorial) return n * std::exp(t * t);
  return normalization_factor(rho, n, t, M);
}

}  // namespace detail

// Series state with an arbitrary starting vector chi in C^n:
// coeffs(., m) = N^{-1/2} Theta_z^m chi / sqrt(rho(m)).
inline VcsState build_series_vcs(const RepMatrix& theta_z, const RhoSequence& rho,
                                 const Eigen::VectorXcd& chi, int M) {
  const int n = theta_z.dim;
  if (chi.size() != n) throw std::invalid_argument("series state: vector length != dim");
  if (M < 0 || M > rho.m_max()) throw std::invalid_argument("series state: M out of rho range");
  const double t = rep_norm(theta_z);
  if (t >= rho.label_radius())
    throw std::domain_error("series state: |x| outside the label set radius");

  const double norm_factor = detail::series_norm_factor(rho, n, t, M);
  const double pref = 1.0 / std::sqrt(norm_factor);

  VcsState s;
  s.n = n;
  s.M = M;
  s.coeffs.resize(n, M + 1);
  Eigen::VectorXcd v = chi;
  s.coeffs.col(0) = pref * v;
  for (int m = 1; m <= M; ++m) {
    v = theta_z.entries * v;
    s.coeffs.col(m) = (pref / std::sqrt(rho.rho(m))) * v;
  }
  s.meta = StateMeta{t, theta_z.phase, 0, StateFamily::Series, false, norm_factor};
  return s;
}

// Same with chi = e_j, j 1-based as in the defining sum over components.
inline VcsState build_series_vcs(const RepMatrix& theta_z, const RhoSequence& rho, int j, int M) {
  if (j < 1 || j > theta_z.dim) throw std::out_of_range("series state: j out of 1..n");
  Eigen::VectorXcd chi = Eigen::VectorXcd::Zero(theta_z.dim);
  chi(j - 1) = 1.0;
  VcsState s = build_series_vcs(theta_z, rho, chi, M);
  s.meta.j = j;
  return s;
}

// Quaternion family |q,j>: prefactor (1/2) e^{-|q|^2/2}, i.e. N = 4 e^{|q|^2}.
inline VcsState build_quaternion_vcs(const AlgebraElement& q, double theta, int j, int M) {
  if (q.tag() != Algebra::Quaternion)
    throw std::invalid_argument("quaternion state: element is not a quaternion");
  return build_series_vcs(apply_phase(quat_to_matrix(q), theta), canonical_rho(M), j, M);
}

// Octonion families from the left or right representation; prefactor
// (1/sqrt(8)) e^{-|a|^2/2}.
inline VcsState build_octonion_vcs(const AlgebraElement& a, double theta, RepSide side, int j,
                                   int M) {
  if (a.tag() != Algebra::Octonion)
    throw std::invalid_argument("octonion state: element is not an octonion");
  return build_series_vcs(apply_phase(representation(a, side), theta), canonical_rho(M), j, M);
}

struct EigenComponent {
  std::complex<double> eigenvalue;
  Eigen::MatrixXcd vectors;  // n x multiplicity, orthonormal columns
  bool degenerate = false;
};

// Spectral split of a represented element: eigenvalues e^{i theta}(a0 +- i b)
// with b the norm of the imaginary part, each with multiplicity n/2. A pure
// real element collapses to one eigenvalue with full multiplicity and is
// flagged degenerate.
inline std::vector<EigenComponent> eigen_split(const RepMatrix& m, Algebra tag) {
  if (!m.source) throw std::invalid_argument("eigen_split: matrix lacks its source element");
  if (m.source->tag() != tag) throw std::invalid_argument("eigen_split: algebra tag mismatch");
  const int n = m.dim;
  const double a0 = m.source->scalar_part();
  const double b = m.source->imaginary_norm();
  const std::complex<double> phase = std::polar(1.0, m.phase);

  if (b == 0.0) {
    EigenComponent comp;
    comp.eigenvalue = phase * a0;
    comp.vectors = Eigen::MatrixXcd::Identity(n, n);
    comp.degenerate = true;
    return {comp};
  }

  const std::complex<double> z_plus = phase * std::complex<double>(a0, b);
  const std::complex<double> z_minus = phase * std::complex<double>(a0, -b);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.entries);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen_split: eigensolver failed");

  const double scale = std::max(1.0, std::abs(z_plus));
  Eigen::MatrixXcd plus_raw(n, n), minus_raw(n, n);
  int n_plus = 0, n_minus = 0;
  for (int k = 0; k < n; ++k) {
    const std::complex<double> ev = es.eigenvalues()(k);
    if (std::abs(ev - z_plus) <= std::abs(ev - z_minus))
      plus_raw.col(n_plus++) = es.eigenvectors().col(k);
    else
      minus_raw.col(n_minus++) = es.eigenvectors().col(k);
    if (std::min(std::abs(ev - z_plus), std::abs(ev - z_minus)) > 1e-10 * scale)
      throw std::runtime_error("eigen_split: eigenvalue off the closed form");
  }
  if (n_plus != n / 2 || n_minus != n / 2)
    throw std::runtime_error("eigen_split: unexpected multiplicities");

  auto orthonormalize = [](const Eigen::MatrixXcd& cols) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cols);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(cols.rows(), cols.cols());
    return q;
  };

  EigenComponent plus{z_plus, orthonormalize(plus_raw.leftCols(n_plus)), false};
  EigenComponent minus{z_minus, orthonormalize(minus_raw.leftCols(n_minus)), false};
  return {plus, minus};
}

// Eigen-collapsed series: Theta_z^m chi = z^m chi turns the matrix series
// into a scalar one.
inline VcsState build_eigen_vcs(std::complex<double> z, const Eigen::VectorXcd& chi,
                                const RhoSequence& rho, int M) {
  const int n = static_cast<int>(chi.size());
  if (std::abs(chi.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("eigen state: eigenvector must have unit norm");
  if (M < 0 || M > rho.m_max()) throw std::invalid_argument("eigen state: M out of rho range");
  const double t = std::abs(z);
  if (t >= rho.label_radius())
    throw std::domain_error("eigen state: |z| outside the label set radius");

  const double norm_factor = detail::series_norm_factor(rho, n, t, M);
  const double pref = 1.0 / std::sqrt(norm_factor);

  VcsState s;
  s.n = n;
  s.M = M;
  s.coeffs.resize(n, M + 1);
  std::complex<double> zm = 1.0;
  for (int m = 0; m <= M; ++m) {
    if (m > 0) zm *= z;
    s.coeffs.col(m) = (pref * zm / std::sqrt(rho.rho(m))) * chi;
  }
  s.meta = StateMeta{t, std::arg(z), 0, StateFamily::EigenSeries, false, norm_factor};
  return s;
}

struct UncertaintyReport {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double delta_q = 0.0;
  double delta_p = 0.0;
  double product = 0.0;
  bool saturated = false;
};

// Dispersions of the quadrature pair on the renormalized state; the
// saturation flag marks |delta_q delta_p - 1/2| <= tol.
inline UncertaintyReport uncertainty(const VcsState& state, const RhoSequence& rho, double tol) {
  const double nrm2 = state.squared_norm();
  if (!(nrm2 > 1e-300)) throw std::invalid_argument("uncertainty: zero-norm state");
  Eigen::VectorXcd psi = state.flatten() / std::sqrt(nrm2);

  auto [q, p] = quadrature_pair(rho, state.M, state.n);
  auto moments_of = [&psi](const Eigen::MatrixXcd& op) {
    Eigen::VectorXcd op_psi = op * psi;
    const double mean = (psi.adjoint() * op_psi)(0, 0).real();
    const double second = op_psi.squaredNorm();
    return std::pair<double, double>(mean, second);
  };
  auto [mq, q2] = moments_of(q.entries);
  auto [mp, p2] = moments_of(p.entries);

  UncertaintyReport rep;
  rep.mean_q = mq;
  rep.mean_p = mp;
  rep.delta_q = std::sqrt(std::max(0.0, q2 - mq * mq));
  rep.delta_p = std::sqrt(std::max(0.0, p2 - mp * mp));
  rep.product = rep.delta_q * rep.delta_p;
  rep.saturated = std::abs(rep.product - 0.5) <= tol;
  return rep;
}

// Exponential form: (1/sqrt(n)) exp(Theta_z (x) adag - Theta_z^dag (x) a)
// applied to e_j (x) phi_0. Factorial sequence only (enforced by the
// displacement operator).
inline VcsState build_exponential_vcs(const RepMatrix& theta_z, int j, int M) {
  const int n = theta_z.dim;
  if (j < 1 || j > n) throw std::out_of_range("exponential state: j out of 1..n");
  auto rho = canonical_rho(M);
  auto d = displacement(theta_z, rho, M);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n * (M + 1));
  v((j - 1) * (M + 1)) = 1.0;
  Eigen::VectorXcd w = d.entries * v / std::sqrt(static_cast<double>(n));

  const double t = rep_norm(theta_z);
  VcsState s;
  s.n = n;
  s.M = M;
  s.coeffs.resize(n, M + 1);
  for (int jj = 0; jj < n; ++jj)
    for (int m = 0; m <= M; ++m) s.coeffs(jj, m) = w(jj * (M + 1) + m);
  s.meta = StateMeta{t, theta_z.phase, j, StateFamily::Exponential, false, n * std::exp(t * t)};
  return s;
}

// Block rotation R(m) = (1/sqrt(m!)) [[I c, -I s], [I s, I c]] with
// I = I_{n/2}; satisfies R(m) R(m)^dag = (1/m!) I_n.
inline Eigen::MatrixXcd rotation_block_R(double x, int m, int n) {
  if (n != 4 && n != 8) throw std::invalid_argument("rotation block: n must be 4 or 8");
  if (m < 0) throw std::invalid_argument("rotation block: m must be >= 0");
  const int h = n / 2;
  const double c = std::cos(x), s = std::sin(x);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  r.topLeftCorner(h, h) = c * Eigen::MatrixXcd::Identity(h, h);
  r.topRightCorner(h, h) = -s * Eigen::MatrixXcd::Identity(h, h);
  r.bottomLeftCorner(h, h) = s * Eigen::MatrixXcd::Identity(h, h);
  r.bottomRightCorner(h, h) = c * Eigen::MatrixXcd::Identity(h, h);
  return r / std::sqrt(std::tgamma(m + 1.0));
}

// Family of moment matrices R(m) with R(m)R(m)^dag = f(m) I_n, plus the
// series sum_m f(m) t^{2m} in closed form when known (needed for the
// identity resolution to converge at every truncation level).
struct MatrixMomentSequence {
  int n = 0;
  std::function<Eigen::MatrixXcd(int)> generator;
  std::function<double(int)> f;
  std::function<double(double)> closed_norm_sum;  // optional: t -> sum_m f(m) t^{2m}

  // residual of R(m)R(m)^dag = R(m)^dag R(m) = f(m) I at one m
  double check(int m) const {
    Eigen::MatrixXcd r = generator(m);
    Eigen::MatrixXcd target = f(m) * Eigen::MatrixXcd::Identity(n, n);
    return std::max((r * r.adjoint() - target).cwiseAbs().maxCoeff(),
                    (r.adjoint() * r - target).cwiseAbs().maxCoeff());
  }
};

inline MatrixMomentSequence rotation_moment_sequence(double x, int n) {
  MatrixMomentSequence seq;
  seq.n = n;
  seq.generator = [x, n](int m) { return rotation_block_R(x, m, n); };
  seq.f = [](int m) { return 1.0 / std::tgamma(m + 1.0); };
  seq.closed_norm_sum = [](double t) { return std::exp(t * t); };
  return seq;
}

enum class MomentPlacement { RLeft, RRight };

// Matrix-moment state: coeffs(., m) = N^{-1/2} R(m) Z^m e_j (or Z^m R(m) e_j
// for the right placement) with N = n sum_m f(m) t^{2m}.
inline VcsState build_matrix_moment_vcs(const RepMatrix& z, const MatrixMomentSequence& seq,
                                        int j, int M,
                                        MomentPlacement placement = MomentPlacement::RLeft) {
  const int n = z.dim;
  if (seq.n != n) throw std::invalid_argument("matrix-moment state: dimension mismatch");
  if (j < 1 || j > n) throw std::out_of_range("matrix-moment state: j out of 1..n");
  if (M < 0) throw std::invalid_argument("matrix-moment state: M must be >= 0");
  const double t = rep_norm(z);

  double series = 0.0;
  if (seq.closed_norm_sum) {
    series = seq.closed_norm_sum(t);
  } else {
    for (int m = 0; m <= M; ++m) series += seq.f(m) * std::pow(t, 2 * m);
  }
  if (!std::isfinite(series) || !(series > 0.0))
    throw std::domain_error("matrix-moment state: normalization series does not converge");
  const double norm_factor = n * series;
  const double pref = 1.0 / std::sqrt(norm_factor);

  Eigen::VectorXcd ej = Eigen::VectorXcd::Zero(n);
  ej(j - 1) = 1.0;

  VcsState s;
  s.n = n;
  s.M = M;
  s.coeffs.resize(n, M + 1);
  Eigen::VectorXcd zm_e = ej;                          // Z^m e_j for the left placement
  Eigen::MatrixXcd zm = Eigen::MatrixXcd::Identity(n, n);  // Z^m for the right placement
  for (int m = 0; m <= M; ++m) {
    if (m > 0) {
      zm_e = z.entries * zm_e;
      if (placement == MomentPlacement::RRight) zm = z.entries * zm;
    }
    if (placement == MomentPlacement::RLeft)
      s.coeffs.col(m) = pref * (seq.generator(m) * zm_e);
    else
      s.coeffs.col(m) = pref * (zm * (seq.generator(m) * ej));
  }
  s.meta = StateMeta{t, z.phase, j, StateFamily::MatrixMoment, false, norm_factor};
  return s;
}

}  // namespace vcs
