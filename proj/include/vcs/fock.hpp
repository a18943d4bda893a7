#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <utility>

#include "vcs/representation.hpp"
#include "vcs/rho.hpp"

namespace vcs {

enum class FockKind { Annihilation, Creation, Number, Custom };

// Operator on the truncated Fock space spanned by phi_0..phi_M.
struct FockOperator {
  int dim;  // M+1
  Eigen::MatrixXcd entries;
  FockKind kind = FockKind::Custom;
};

// a phi_m = sqrt(x_m) phi_{m-1}, its adjoint (with the truncation
// convention adag phi_M = 0), and the number operator diag(x_m), x_0 = 0.
inline FockOperator ladder(const RhoSequence& rho, int M, FockKind kind) {
  if (M < 0 || M > rho.m_max()) throw std::invalid_argument("ladder: M out of rho range");
  if (kind == FockKind::Custom) throw std::invalid_argument("ladder: no defining relation for Custom");
  const int d = M + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  switch (kind) {
    case FockKind::Annihilation:
      for (int k = 1; k <= M; ++k) m(k - 1, k) = std::sqrt(rho.x(k));
      break;
    case FockKind::Creation:
      for (int k = 1; k <= M; ++k) m(k, k - 1) = std::sqrt(rho.x(k));
      break;
    case FockKind::Number:
      for (int k = 1; k <= M; ++k) m(k, k) = rho.x(k);
      break;
    default:
      break;
  }
  return FockOperator{d, std::move(m), kind};
}

enum class LiftKind { A, Adag, N, Q, P, Displacement, Custom };

// Operator on C^n (x) H_M, flattened with component-major indexing
// (j, m) -> j (M+1) + m.
struct LiftedOperator {
  int n;
  int fock_dim;  // M+1
  Eigen::MatrixXcd entries;
  LiftKind kind = LiftKind::Custom;
};

inline LiftedOperator lift(const FockOperator& op, int n) {
  if (n < 1) throw std::invalid_argument("lift: n must be >= 1");
  LiftKind kind = LiftKind::Custom;
  if (op.kind == FockKind::Annihilation) kind = LiftKind::A;
  if (op.kind == FockKind::Creation) kind = LiftKind::Adag;
  if (op.kind == FockKind::Number) kind = LiftKind::N;
  Eigen::MatrixXcd big =
      Eigen::kroneckerProduct(Eigen::MatrixXcd::Identity(n, n), op.entries);
  return LiftedOperator{n, op.dim, std::move(big), kind};
}

// Q = (A + Adag)/sqrt(2), P = (A - Adag)/(i sqrt(2)); both self-adjoint.
inline std::pair<LiftedOperator, LiftedOperator> quadrature_pair(const RhoSequence& rho, int M,
                                                                 int n) {
  const auto a = lift(ladder(rho, M, FockKind::Annihilation), n);
  const auto adag = lift(ladder(rho, M, FockKind::Creation), n);
  const std::complex<double> i_unit(0.0, 1.0);
  LiftedOperator q{n, M + 1, (a.entries + adag.entries) / std::sqrt(2.0), LiftKind::Q};
  LiftedOperator p{n, M + 1, (a.entries - adag.entries) / (i_unit * std::sqrt(2.0)), LiftKind::P};
  return {std::move(q), std::move(p)};
}

// Dense matrix exponential (scaling-and-squaring Pade).
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: square matrix required");
  return m.exp();
}

// Independent route for skew-adjoint generators: H = -iE is Hermitian, so
// exp(E) = V diag(e^{i lambda}) V^dagger from the eigendecomposition of H.
inline Eigen::MatrixXcd expm_skew_hermitian(const Eigen::MatrixXcd& e) {
  if (e.rows() != e.cols()) throw std::invalid_argument("expm_skew_hermitian: square matrix required");
  const std::complex<double> i_unit(0.0, 1.0);
  Eigen::MatrixXcd h = -i_unit * e;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("expm_skew_hermitian: generator is not skew-adjoint");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expm_skew_hermitian: eigendecomposition failed");
  Eigen::VectorXcd phases =
      (i_unit * es.eigenvalues().cast<std::complex<double>>().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(Theta_z (x) adag - Theta_z^dagger (x) a) on C^n (x) H_M. The
// exponential-form states require the factorial sequence, so other
// sequences are refused.
inline LiftedOperator displacement(const RepMatrix& theta_z, const RhoSequence& rho, int M) {
  if (rho.kind() != RhoKind::CanonicalFactorial)
    throw std::invalid_argument("displacement: defined for the factorial sequence only");
  const auto a = ladder(rho, M, FockKind::Annihilation);
  const auto adag = ladder(rho, M, FockKind::Creation);
  Eigen::MatrixXcd exponent =
      Eigen::kroneckerProduct(theta_z.entries, adag.entries) -
      Eigen::kroneckerProduct(theta_z.entries.adjoint().eval(), a.entries);
  return LiftedOperator{theta_z.dim, M + 1, expm(exponent), LiftKind::Displacement};
}

}  // namespace vcs
