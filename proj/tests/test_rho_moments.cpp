#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "vcs/moments.hpp"
#include "vcs/quadrature.hpp"
#include "vcs/rho.hpp"

using namespace vcs;

TEST_CASE("gauss-laguerre integrates e^{-r} r^m exactly") {
  auto rule = gauss_laguerre(32);
  CHECK(rule.nodes.minCoeff() > 0.0);
  CHECK(rule.weights.minCoeff() > 0.0);
  CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));

  double target = 1.0;  // m!
  for (int m = 0; m <= 25; ++m) {
    if (m > 0) target *= m;
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights(i) * std::pow(rule.nodes(i), m);
    CHECK(std::abs(acc - target) <= 1e-11 * target);
  }
  CHECK_THROWS_AS(gauss_laguerre(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_laguerre(500), std::invalid_argument);
}

TEST_CASE("gauss-legendre on generic intervals") {
  auto rule = gauss_legendre(24, 0.0, 1.0);
  CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k <= 12; ++k) {
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights(i) * std::pow(rule.nodes(i), k);
    CHECK(acc == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }

  auto wide = gauss_legendre(40, 0.0, std::numbers::pi);
  double s = 0.0;
  for (int i = 0; i < wide.nodes.size(); ++i) s += wide.weights(i) * std::sin(wide.nodes(i));
  CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("canonical rho sequence") {
  auto rho = canonical_rho(40);
  CHECK(rho.rho(0) == 1.0);
  CHECK(rho.rho(5) == 120.0);
  CHECK(rho.x(5) == 5.0);
  CHECK(rho.factorial(0) == 1.0);
  CHECK(std::isinf(rho.radius()));
  CHECK(std::isinf(rho.label_radius()));
  CHECK_THROWS_AS(rho.rho(41), std::out_of_range);
  CHECK_THROWS_AS(rho.x(0), std::out_of_range);
  CHECK_THROWS_AS(canonical_rho(-1), std::invalid_argument);
}

TEST_CASE("rho tables normalize and rebuild from ratios") {
  auto table = RhoSequence::from_table({2.0, 3.0, 7.0, 21.0}, 16.0);
  CHECK(table.rho(0) == 1.0);
  CHECK(table.factorial(2) == doctest::Approx(3.5));
  CHECK(table.label_radius() == doctest::Approx(4.0));

  for (const auto& rho : {canonical_rho(30), table}) {
    double prod = 1.0;
    for (int m = 1; m <= rho.m_max(); ++m) {
      prod *= rho.x(m);
      CHECK(std::abs(prod - rho.rho(m)) <= 1e-12 * rho.rho(m));
    }
  }
  CHECK_THROWS_AS(RhoSequence::from_table({}), std::invalid_argument);
  CHECK_THROWS_AS(RhoSequence::from_table({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(RhoSequence::from_table({1.0, 2.0}, -1.0), std::invalid_argument);
}

TEST_CASE("canonical density and its first moments") {
  auto lam = canonical_density();
  CHECK(lam(0.0) == 2.0);
  CHECK(std::isinf(lam.support_upper()));
  CHECK_THROWS_AS(lam(-0.5), std::invalid_argument);

  // int_0^inf 2 e^{-t^2} t^{2m+1} dt = m!
  QuadratureSpec spec;
  auto checks = verify_moments(lam, canonical_rho(20), 20, spec);
  REQUIRE(checks.size() == 21);
  CHECK(checks[0].integral == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(checks[1].integral == doctest::Approx(1.0).epsilon(1e-13));
  for (const auto& c : checks) {
    CHECK(c.relative_error <= 1e-10);
    CHECK(c.converged);
  }
}

TEST_CASE("plain gaussian density misses the moments by a factor two") {
  auto plain = DensityFunction::from_function(
      [](double t) { return std::exp(-t * t); }, std::numeric_limits<double>::infinity());
  QuadratureSpec spec;
  auto checks = verify_moments(plain, canonical_rho(5), 5, spec);
  for (const auto& c : checks) {
    CHECK(c.integral == doctest::Approx(0.5 * c.target).epsilon(1e-12));
    CHECK(c.relative_error == doctest::Approx(0.5).epsilon(1e-11));
  }
}

TEST_CASE("any density normalized in its first moment passes m = 0") {
  // lambda(t) = 4 t e^{-2t} has int lambda t dt = 4 * Gamma(3)/8 = 1
  auto lam = DensityFunction::from_function(
      [](double t) { return 4.0 * t * std::exp(-2.0 * t); },
      std::numeric_limits<double>::infinity());
  QuadratureSpec spec;
  spec.radial_rule = RadialRule::GaussLegendreTruncated;
  spec.radial_points = 128;
  spec.t_cutoff = 40.0;
  auto checks = verify_moments(lam, canonical_rho(0), 0, spec);
  CHECK(checks[0].relative_error <= 1e-12);
}

TEST_CASE("truncated legendre route agrees with the laguerre route") {
  auto lam = canonical_density();
  QuadratureSpec spec;
  spec.radial_rule = RadialRule::GaussLegendreTruncated;
  spec.radial_points = 80;
  spec.t_cutoff = density_cutoff(lam, 10, 3628800.0);
  auto checks = verify_moments(lam, canonical_rho(10), 10, spec);
  for (const auto& c : checks) CHECK(c.relative_error <= 1e-10);
}

TEST_CASE("verify_moments input validation") {
  auto lam = canonical_density();
  QuadratureSpec spec;
  CHECK_THROWS_AS(verify_moments(lam, canonical_rho(5), 9, spec), std::invalid_argument);
  QuadratureSpec tiny;
  tiny.radial_points = 4;
  CHECK_THROWS_AS(verify_moments(lam, canonical_rho(20), 20, tiny), std::invalid_argument);
  QuadratureSpec bad;
  bad.radial_rule = RadialRule::GaussLegendreTruncated;
  CHECK_THROWS_AS(verify_moments(lam, canonical_rho(5), 5, bad), std::invalid_argument);

  auto negative = DensityFunction::from_function(
      [](double t) { return 1.0 - t; }, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(verify_moments(negative, canonical_rho(5), 5, spec), std::domain_error);
}

TEST_CASE("normalization factor: closed forms and monotonicity") {
  auto rho = canonical_rho(80);
  CHECK(normalization_factor(rho, 4, 0.0, 40) == 4.0);
  CHECK(normalization_factor(rho, 7, 0.0, 0) == 7.0);

  // n e^{t^2}: 4e and 8e^4
  CHECK(normalization_factor(rho, 4, 1.0, 60) ==
        doctest::Approx(4.0 * std::exp(1.0)).epsilon(1e-14));
  CHECK(normalization_factor(rho, 8, 2.0, 80) ==
        doctest::Approx(8.0 * std::exp(4.0)).epsilon(1e-14));
  CHECK(normalization_factor(rho, 4, 1.0, 60) == doctest::Approx(10.8731273138));

  double prev = 0.0;
  for (int M : {1, 2, 5, 10, 20, 40}) {
    double cur = normalization_factor(rho, 4, 1.5, M);
    CHECK(cur >= prev);
    CHECK(cur <= 4.0 * std::exp(1.5 * 1.5) + 1e-12);
    prev = cur;
  }

  auto finite = RhoSequence::from_table({1.0, 1.0, 1.0}, 1.0);
  CHECK_THROWS_AS(normalization_factor(finite, 4, 1.5, 2), std::domain_error);
  CHECK_THROWS_AS(normalization_factor(rho, 4, -1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(normalization_factor(rho, 0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("truncation bound dominates the true tail") {
  auto rho = canonical_rho(100);
  CHECK(truncation_bound(rho, 0.0, 5) == 0.0);
  CHECK(truncation_bound(rho, 1.0, 20) < 1e-19);

  // brute-force tail of e^{t^2} at t = 3 beyond M = 40
  const double t2 = 9.0;
  double term = 1.0, tail = 0.0;
  for (int m = 1; m <= 300; ++m) {
    term *= t2 / m;
    if (m > 40) tail += term;
  }
  const double bound = truncation_bound(rho, 3.0, 40);
  CHECK(bound >= tail);
  // looseness is at most the e^{t^2} factor over the leading tail term
  CHECK(bound <= std::exp(t2) * tail);

  CHECK_THROWS_AS(truncation_bound(RhoSequence::from_table({1.0, 2.0}), 1.0, 0),
                  std::invalid_argument);
}

TEST_CASE("fock level selection from the tail bound") {
  auto rho = canonical_rho(200);
  const double t = 2.0, tol = 1e-12;
  int M = fock_level_for_tolerance(rho, t, tol);
  CHECK(truncation_bound(rho, t, M) <= tol);
  CHECK(truncation_bound(rho, t, M - 1) > tol);
  CHECK(M < 60);
}

TEST_CASE("density cutoff covers the requested moment mass") {
  auto lam = canonical_density();
  const double T = density_cutoff(lam, 20, std::tgamma(21.0));
  CHECK(T > 3.0);
  CHECK(T < 30.0);

  auto finite = DensityFunction::from_table({{0.0, 1.0}, {2.0, 0.0}});
  CHECK(density_cutoff(finite, 5, 1.0) == 2.0);
}

TEST_CASE("density tables interpolate linearly") {
  auto lam = DensityFunction::from_table({{0.0, 2.0}, {1.0, 1.0}, {3.0, 0.0}});
  CHECK(lam(0.0) == 2.0);
  CHECK(lam(0.5) == doctest::Approx(1.5));
  CHECK(lam(2.0) == doctest::Approx(0.5));
  CHECK(lam(5.0) == 0.0);
  CHECK(lam.support_upper() == 3.0);
  CHECK_THROWS_AS(DensityFunction::from_table({{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DensityFunction::from_table({{0.0, 1.0}, {1.0, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DensityFunction::from_table({{1.0, 1.0}, {0.5, 1.0}}), std::invalid_argument);
}
