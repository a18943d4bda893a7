#include <chrono>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "test_support.hpp"
#include "vcs/verify.hpp"

using namespace vcs;

namespace {
QuadratureSpec laguerre_spec(int radial, int angular = 64) {
  QuadratureSpec q;
  q.radial_rule = RadialRule::GaussLaguerreOnRSubstitution;
  q.radial_points = radial;
  q.angular_points = angular;
  return q;
}
}  // namespace

TEST_CASE("spectral norm estimate") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.5;
  CHECK(spectral_norm_estimate(d) == doctest::Approx(3.0).epsilon(1e-9));

  vcs_test::Rng rng(11);
  Eigen::MatrixXcd h(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) h(i, j) = {rng.symmetric(), rng.symmetric()};
  Eigen::MatrixXcd herm = h + h.adjoint();
  const double est = spectral_norm_estimate(herm);
  // the two-norm dominates the largest entry of a Hermitian matrix
  CHECK(est + 1e-9 >= herm.cwiseAbs().maxCoeff());
  CHECK(est <= 6.0 * herm.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(spectral_norm_estimate(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("series identity resolution: quaternion and octonion") {
  auto lambda = canonical_density();
  auto rep = resolve_identity_series(LabelFamily::Quaternion, canonical_rho(15), lambda,
                                     laguerre_spec(64), 15, 32);
  CHECK(rep.passed);
  CHECK(rep.residual <= 1e-8);
  CHECK(rep.truncation_M == 15);
  CHECK(rep.check_name == "identity-resolution-series-quaternion");
  // spectral and entrywise norms agree on scale for the defect
  CHECK(rep.spectral_estimate <= 64 * 4 * std::max(rep.residual, 1e-16));

  auto rep_oct = resolve_identity_series(LabelFamily::OctonionLeft, canonical_rho(10), lambda,
                                         laguerre_spec(64), 10, 22);
  CHECK(rep_oct.residual <= 1e-8);
  auto rep_oct_r = resolve_identity_series(LabelFamily::OctonionRight, canonical_rho(10), lambda,
                                           laguerre_spec(64), 10, 22);
  CHECK(rep_oct_r.residual <= 1e-8);
}

TEST_CASE("series identity resolution: single Fock level") {
  auto rep = resolve_identity_series(LabelFamily::Quaternion, canonical_rho(0),
                                     canonical_density(), laguerre_spec(32), 0, 2);
  CHECK(rep.residual <= 1e-13);
}

TEST_CASE("series identity resolution: plain Gaussian density gives half the identity") {
  auto plain = DensityFunction::from_function(
      [](double t) { return std::exp(-t * t); }, std::numeric_limits<double>::infinity());
  auto rep = resolve_identity_series(LabelFamily::Quaternion, canonical_rho(8), plain,
                                     laguerre_spec(64), 8, 18);
  CHECK(!rep.passed);
  CHECK(std::abs(rep.residual - 0.5) <= 1e-9);
}

TEST_CASE("series identity resolution: theta grid refusal boundary") {
  auto lambda = canonical_density();
  auto rho = canonical_rho(3);
  CHECK_THROWS_AS(resolve_identity_series(LabelFamily::Quaternion, rho, lambda, laguerre_spec(32),
                                          3, 7),
                  std::invalid_argument);
  auto rep = resolve_identity_series(LabelFamily::Quaternion, rho, lambda, laguerre_spec(32), 3,
                                     8);  // exactly 2M+2
  CHECK(rep.residual <= 1e-10);
  CHECK_THROWS_AS(resolve_identity_series(LabelFamily::Quaternion, rho, lambda, laguerre_spec(32),
                                          5, 12),
                  std::invalid_argument);  // M beyond the rho table
}

TEST_CASE("series identity resolution: residual falls with radial order until the floor") {
  const int M = 34;
  auto rho = canonical_rho(M);
  auto lambda = canonical_density();
  std::vector<double> residuals;
  for (int order : {8, 16, 32, 64})
    residuals.push_back(resolve_identity_series(LabelFamily::Quaternion, rho, lambda,
                                                laguerre_spec(order), M, 2 * M + 2)
                            .residual);
  const double floor = 1e-11;
  CHECK(residuals[0] > 1e-6);         // order 8 cannot integrate degree 34 in r
  CHECK(residuals[1] < residuals[0]);  // order 16 is closer but still short
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
    CHECK(residuals[i + 1] <= std::max(residuals[i], floor));
  CHECK(residuals.back() <= floor);
}

TEST_CASE("series identity resolution: direction independence") {
  auto rho = canonical_rho(10);
  auto lambda = canonical_density();
  vcs_test::Rng rng(5);
  std::vector<double> residuals;
  residuals.push_back(resolve_identity_series(LabelFamily::Quaternion, rho, lambda,
                                              laguerre_spec(64), 10, 22)
                          .residual);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd dir = rng.vector(4);
    residuals.push_back(resolve_identity_series(LabelFamily::Quaternion, rho, lambda,
                                                laguerre_spec(64), 10, 22, 1e-8, dir)
                            .residual);
  }
  for (double r : residuals) CHECK(r <= 1e-8);
  for (std::size_t i = 1; i < residuals.size(); ++i)
    CHECK(std::abs(residuals[i] - residuals[0]) <= 1e-10);

  Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(resolve_identity_series(LabelFamily::Quaternion, rho, lambda, laguerre_spec(32),
                                          10, 22, 1e-8, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_identity_series(LabelFamily::Quaternion, rho, lambda, laguerre_spec(32),
                                          10, 22, 1e-8, Eigen::VectorXd::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("series identity resolution: truncated Legendre radial rule") {
  QuadratureSpec spec;
  spec.radial_rule = RadialRule::GaussLegendreTruncated;
  spec.radial_points = 64;
  spec.t_cutoff = 8.0;
  auto rep = resolve_identity_series(LabelFamily::Quaternion, canonical_rho(8),
                                     canonical_density(), spec, 8, 18);
  CHECK(rep.residual <= 1e-10);
}

TEST_CASE("series identity resolution: scalar reduction is the classical coherent family") {
  auto rep = resolve_identity_series(LabelFamily::Scalar, canonical_rho(12), canonical_density(),
                                     laguerre_spec(64), 12, 26);
  CHECK(rep.residual <= 1e-12);
}

TEST_CASE("matrix-moment identity resolution") {
  auto rep = resolve_identity_matrix_moment(LabelFamily::Quaternion, 0.7, laguerre_spec(64, 26),
                                            12);
  CHECK(rep.passed);
  CHECK(rep.residual <= 1e-8);
  CHECK(rep.check_name == "identity-resolution-matrix-moment-quaternion");

  // the unitary rotation factor cancels: residual independent of x
  auto rep0 = resolve_identity_matrix_moment(LabelFamily::Quaternion, 0.0, laguerre_spec(64, 26),
                                             12);
  CHECK(std::abs(rep.residual - rep0.residual) <= 1e-12);

  auto rep_oct =
      resolve_identity_matrix_moment(LabelFamily::OctonionLeft, 1.1, laguerre_spec(64, 18), 8);
  CHECK(rep_oct.residual <= 1e-8);

  auto rep_right = resolve_identity_matrix_moment(LabelFamily::Quaternion, 0.7,
                                                  laguerre_spec(64, 26), 12, 1e-8,
                                                  MomentPlacement::RRight);
  CHECK(rep_right.residual <= 1e-8);

  CHECK_THROWS_AS(resolve_identity_matrix_moment(LabelFamily::Scalar, 0.0, laguerre_spec(32), 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_identity_matrix_moment(LabelFamily::Quaternion, 0.0,
                                                 laguerre_spec(32, 10), 6),
                  std::invalid_argument);  // 10 < 2M+2
}

TEST_CASE("definition axiom bundle") {
  AxiomParams params;
  params.t = 1.0;
  params.M = 15;
  params.quad = laguerre_spec(64);
  auto reports = check_definition_axioms(LabelFamily::Quaternion, params);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].check_name == "normalization-sum-quaternion");
  CHECK(reports[1].check_name == "component-norms-quaternion");
  CHECK(reports[2].check_name == "identity-resolution-quaternion");
  CHECK(all_passed(reports));
  CHECK(reports[0].tail_bound <= 1e-12);  // truncation well below the norm tolerance

  AxiomParams oct = params;
  oct.M = 12;
  oct.t = 0.8;
  CHECK(all_passed(check_definition_axioms(LabelFamily::OctonionLeft, oct)));
  CHECK(all_passed(check_definition_axioms(LabelFamily::Scalar, params)));
}

TEST_CASE("definition axiom bundle: wrong prefactor is caught") {
  AxiomParams params;
  params.t = 1.0;
  params.M = 15;
  params.quad = laguerre_spec(64);
  // e^{-t^2} instead of e^{-t^2/2} in the prefactor
  params.prefactor_scale = std::exp(-0.5 * params.t * params.t);
  auto reports = check_definition_axioms(LabelFamily::Quaternion, params);
  CHECK(!reports[0].passed);
  CHECK(std::abs(reports[0].residual - std::abs(1.0 - std::exp(-1.0))) <= 1e-9);
  CHECK(!reports[2].passed);
  CHECK(!all_passed(reports));
}

TEST_CASE("representation audit") {
  auto start = std::chrono::steady_clock::now();
  auto reports = representation_audit(1000, 42);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(elapsed < 5.0);
  REQUIRE(reports.size() == 8);
  for (const auto& r : reports) {
    CHECK(r.passed);
    CHECK(r.residual <= 1e-12);
  }
  CHECK(all_passed(reports));

  // deterministic for a fixed seed
  auto again = representation_audit(1000, 42);
  for (std::size_t i = 0; i < reports.size(); ++i)
    CHECK(again[i].residual == reports[i].residual);

  // the seed actually steers the sample stream
  AuditRng r42(42), r43(43);
  CHECK(r42.uniform() != r43.uniform());
  CHECK(AuditRng(42).element(Algebra::Octonion).coeffs() == AuditRng(42).vector(8));
  CHECK(AuditRng(7).vector(8) == AuditRng(7).vector(8));

  // one sample = just the zero element: trivially satisfied
  for (const auto& r : representation_audit(1, 9)) CHECK(r.residual == 0.0);

  CHECK_THROWS_AS(representation_audit(0, 42), std::invalid_argument);
}

TEST_CASE("representation audit: sign-flip fault trips the left action check") {
  AuditFault fault;
  fault.flip_omega_sign = true;
  auto reports = representation_audit(50, 42, fault);
  CHECK(!all_passed(reports));
  bool left_action_failed = false;
  for (const auto& r : reports)
    if (r.check_name == "audit-left-action") left_action_failed = !r.passed;
  CHECK(left_action_failed);
}
