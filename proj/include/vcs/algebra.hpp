#ifndef VCS_ALGEBRA_HPP
#define VCS_ALGEBRA_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace vcs {

enum class Algebra { Quaternion, Octonion };

inline constexpr int algebra_dim(Algebra a) {
  return a == Algebra::Quaternion ? 4 : 8;
}

inline const char* algebra_name(Algebra a) {
  return a == Algebra::Quaternion ? "quaternion" : "octonion";
}

/// Element of the real quaternion or octonion algebra, stored as a real
/// coefficient vector with the scalar part first and the imaginary units
/// in basis order (1, e1, ..., e_{n-1}).
class AlgebraElement {
 public:
  AlgebraElement(Algebra tag, Eigen::VectorXd coeffs)
      : tag_(tag), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != algebra_dim(tag_))
      throw std::invalid_argument(
          std::string(algebra_name(tag_)) + " element needs " +
          std::to_string(algebra_dim(tag_)) + " coefficients, got " +
          std::to_string(coeffs_.size()));
  }

  static AlgebraElement zero(Algebra tag) {
    return AlgebraElement(tag, Eigen::VectorXd::Zero(algebra_dim(tag)));
  }

  /// Basis element e_k; k = 0 is the algebra identity.
  static AlgebraElement basis(Algebra tag, int k) {
    const int n = algebra_dim(tag);
    if (k < 0 || k >= n)
      throw std::invalid_argument("basis index out of range: " + std::to_string(k));
    return AlgebraElement(tag, Eigen::VectorXd::Unit(n, k));
  }

  static AlgebraElement quaternion(double a0, double a1, double a2, double a3) {
    Eigen::VectorXd c(4);
    c << a0, a1, a2, a3;
    return AlgebraElement(Algebra::Quaternion, std::move(c));
  }

  static AlgebraElement octonion(double a0, double a1, double a2, double a3,
                                 double a4, double a5, double a6, double a7) {
    Eigen::VectorXd c(8);
    c << a0, a1, a2, a3, a4, a5, a6, a7;
    return AlgebraElement(Algebra::Octonion, std::move(c));
  }

  Algebra tag() const { return tag_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](int i) const { return coeffs_(i); }

  double scalar_part() const { return coeffs_(0); }
  /// Euclidean norm of the imaginary part, the b of the eigenvalue pair a0 +- ib.
  double imaginary_norm() const { return coeffs_.tail(dim() - 1).norm(); }

  double norm() const { return coeffs_.norm(); }
  double squared_norm() const { return coeffs_.squaredNorm(); }

  AlgebraElement scaled(double s) const { return AlgebraElement(tag_, s * coeffs_); }

 private:
  Algebra tag_;
  Eigen::VectorXd coeffs_;
};

namespace detail {

inline Eigen::VectorXd cd_conjugate(const Eigen::VectorXd& v) {
  Eigen::VectorXd w = -v;
  w(0) = v(0);
  return w;
}

// Cayley-Dickson doubling with the convention (a,b)(c,d) = (ac - conj(d) b, da + b conj(c)).
// This reproduces Hamilton's quaternions (ij = k, ijk = -1) and the octonion
// basis products realized by the left matrix representation.
inline Eigen::VectorXd cd_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.size();
  if (n == 1) {
    Eigen::VectorXd out(1);
    out(0) = x(0) * y(0);
    return out;
  }
  const Eigen::Index h = n / 2;
  const Eigen::VectorXd a = x.head(h), b = x.tail(h);
  const Eigen::VectorXd c = y.head(h), d = y.tail(h);
  Eigen::VectorXd out(n);
  out.head(h) = cd_product(a, c) - cd_product(cd_conjugate(d), b);
  out.tail(h) = cd_product(d, a) + cd_product(b, cd_conjugate(c));
  return out;
}

}  // namespace detail

/// Product in the ambient algebra via the Cayley-Dickson construction.
/// Serves as the multiplication oracle the matrix representations are
/// checked against; satisfies |a o b| = |a| |b| up to rounding.
inline AlgebraElement cd_multiply(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.tag() != b.tag())
    throw std::invalid_argument("cd_multiply: mismatched algebra tags");
  return AlgebraElement(a.tag(), detail::cd_product(a.coeffs(), b.coeffs()));
}

/// Algebra conjugation: scalar part kept, imaginary coefficients negated.
inline AlgebraElement conjugate(const AlgebraElement& a) {
  return AlgebraElement(a.tag(), detail::cd_conjugate(a.coeffs()));
}

}  // namespace vcs

#endif  // VCS_ALGEBRA_HPP
