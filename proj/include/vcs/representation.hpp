#ifndef VCS_REPRESENTATION_HPP
#define VCS_REPRESENTATION_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "vcs/algebra.hpp"

namespace vcs {

/// Dense complex square matrix carrying the representation of an algebra
/// element together with the S^1 phase that has been applied to it.
/// phase = 0 matrices are purely real.
struct RepMatrix {
  int dim = 0;
  Eigen::MatrixXcd entries;
  double phase = 0.0;  // in [0, 2*pi)
  std::optional<AlgebraElement> source;
};

namespace detail {

// Sign patterns of the real matrix representations, row by row.
// Entry s encodes matrix(r,c) = sign(s) * a_{|s|-1}.
inline constexpr int kQuaternionPattern[4][4] = {
    {+1, -2, -3, -4},
    {+2, +1, -4, +3},
    {+3, +4, +1, -2},
    {+4, -3, +2, +1},
};

inline constexpr int kOctonionLeftPattern[8][8] = {
    {+1, -2, -3, -4, -5, -6, -7, -8},
    {+2, +1, -4, +3, -6, +5, +8, -7},
    {+3, +4, +1, -2, -7, -8, +5, +6},
    {+4, -3, +2, +1, -8, +7, -6, +5},
    {+5, +6, +7, +8, +1, -2, -3, -4},
    {+6, -5, +8, -7, +2, +1, +4, -3},
    {+7, -8, -5, +6, +3, -4, +1, +2},
    {+8, +7, -6, -5, +4, +3, -2, +1},
};

inline constexpr int kOctonionRightPattern[8][8] = {
    {+1, -2, -3, -4, -5, -6, -7, -8},
    {+2, +1, +4, -3, +6, -5, -8, +7},
    {+3, -4, +1, +2, +7, +8, -5, -6},
    {+4, +3, -2, +1, +8, -7, +6, -5},
    {+5, -6, -7, -8, +1, +2, +3, +4},
    {+6, +5, -8, +7, -2, +1, -4, +3},
    {+7, +8, +5, -6, -3, +4, +1, -2},
    {+8, -7, +6, +5, -4, -3, +2, +1},
};

template <int N>
Eigen::MatrixXcd from_pattern(const int (&pattern)[N][N], const Eigen::VectorXd& a) {
  Eigen::MatrixXcd m(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const int s = pattern[r][c];
      const double v = (s > 0 ? a(s - 1) : -a(-s - 1));
      m(r, c) = std::complex<double>(v, 0.0);
    }
  return m;
}

inline double wrap_phase(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  return t;
}

}  // namespace detail

/// 4x4 real matrix of the quaternion algebra, basis order (1, i, j, k).
inline RepMatrix quat_to_matrix(const AlgebraElement& q) {
  if (q.tag() != Algebra::Quaternion)
    throw std::invalid_argument("quat_to_matrix: element is not a quaternion");
  return RepMatrix{4, detail::from_pattern(detail::kQuaternionPattern, q.coeffs()), 0.0, q};
}

/// Left octonion representation omega(a): omega(a) vec(b) = vec(a o b).
inline RepMatrix oct_left_matrix(const AlgebraElement& a) {
  if (a.tag() != Algebra::Octonion)
    throw std::invalid_argument("oct_left_matrix: element is not an octonion");
  return RepMatrix{8, detail::from_pattern(detail::kOctonionLeftPattern, a.coeffs()), 0.0, a};
}

/// Right octonion representation nu(a): nu(a) vec(b) = vec(b o a).
inline RepMatrix oct_right_matrix(const AlgebraElement& a) {
  if (a.tag() != Algebra::Octonion)
    throw std::invalid_argument("oct_right_matrix: element is not an octonion");
  return RepMatrix{8, detail::from_pattern(detail::kOctonionRightPattern, a.coeffs()), 0.0, a};
}

/// K8 = diag(1, -I7): the conjugation sign pattern. Orthogonal, and the
/// unique diagonal sign matrix linking the two octonion representations via
/// nu(a) = K8 omega(a)^T K8 (equivalently nu(a) = K8 omega(conj(a)) K8,
/// which is b o a = conj(conj(a) o conj(b)) read entrywise).
inline RepMatrix k8_metric() {
  Eigen::VectorXcd d(8);
  d << 1, -1, -1, -1, -1, -1, -1, -1;
  return RepMatrix{8, d.asDiagonal().toDenseMatrix(), 0.0, std::nullopt};
}

/// Phase extension: multiplies all entries by e^{i theta}. The accumulated
/// phase is tracked modulo 2*pi; the norm property is unchanged.
inline RepMatrix apply_phase(const RepMatrix& m, double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("apply_phase: theta must be finite");
  const std::complex<double> z = std::polar(1.0, theta);
  return RepMatrix{m.dim, z * m.entries, detail::wrap_phase(m.phase + theta), m.source};
}

enum class RepSide { Left, Right };

/// Representation matrix of an element: the 4x4 quaternion matrix, or the
/// chosen octonion representation.
inline RepMatrix representation(const AlgebraElement& x, RepSide side = RepSide::Left) {
  if (x.tag() == Algebra::Quaternion) return quat_to_matrix(x);
  return side == RepSide::Left ? oct_left_matrix(x) : oct_right_matrix(x);
}

/// |x| of the represented element, recovered from the matrix when no source
/// element is attached (valid because M M^dagger = |x|^2 I).
inline double rep_norm(const RepMatrix& m) {
  if (m.source) return m.source->norm();
  return m.entries.norm() / std::sqrt(static_cast<double>(m.dim));
}

}  // namespace vcs

#endif  // VCS_REPRESENTATION_HPP
