// cliffvcs: command-line front end for the coherent-state library.
// Builds states over the quaternion/octonion matrix representations, runs
// the verification checks, prints a human-readable table and writes a
// machine-readable JSON report.
//
// Exit codes: 0 all checks passed, 1 at least one check failed,
// 2 usage or configuration error.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vcs/verify.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace vcs;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double identity = 1e-8;
  double normalization = 1e-10;
  double moments = 1e-10;
  double uncertainty = 1e-8;
  double expform = 1e-9;
  double audit = 1e-12;
};

struct RunConfig {
  std::string algebra = "quaternion";
  std::vector<double> element;  // empty: per-algebra default (1,1,...,1)
  double theta = 0.0;
  int component_j = 1;

  bool rho_factorial = true;
  std::vector<double> rho_table;
  double rho_radius = std::numeric_limits<double>::infinity();

  bool density_canonical = true;
  std::vector<std::pair<double, double>> density_table;

  int fock_level = -1;            // -1: command-specific default
  double target_tolerance = 0.0;  // 0: unset; else selects fock_level by tail bound

  std::string radial_rule = "auto";  // auto | laguerre | legendre
  int radial_points = 64;
  int angular_points = 0;  // 0: max(64, 2M+2)
  double t_cutoff = 0.0;   // 0: from the density support

  std::uint64_t seed = 42;
  int samples = 1000;
  Tolerances tol;
  int moments_m_max = 20;
  double rotation_x = 0.7;
  std::string placement = "left";

  bool fault_flip_omega = false;
  double fault_prefactor_scale = 1.0;

  std::string output = "report.json";
};

template <typename T>
T field_as(const ordered_json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config field '" + name + "' has the wrong type");
  }
}

RunConfig parse_config(const std::string& path) {
  RunConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  if (j.contains("algebra")) c.algebra = field_as<std::string>(j["algebra"], "algebra");
  if (j.contains("element")) c.element = field_as<std::vector<double>>(j["element"], "element");
  if (j.contains("theta")) c.theta = field_as<double>(j["theta"], "theta");
  if (j.contains("component_j")) c.component_j = field_as<int>(j["component_j"], "component_j");

  if (j.contains("rho")) {
    const auto& r = j["rho"];
    if (r.is_string() && r.get<std::string>() == "factorial") {
      c.rho_factorial = true;
    } else if (r.is_object() && r.contains("table")) {
      c.rho_factorial = false;
      c.rho_table = field_as<std::vector<double>>(r["table"], "rho.table");
      if (r.contains("radius")) c.rho_radius = field_as<double>(r["radius"], "rho.radius");
    } else {
      throw ConfigError("config field 'rho' must be \"factorial\" or {\"table\": [...]}");
    }
  }
  if (j.contains("density")) {
    const auto& d = j["density"];
    if (d.is_string() && d.get<std::string>() == "canonical") {
      c.density_canonical = true;
    } else if (d.is_object() && d.contains("table")) {
      c.density_canonical = false;
      c.density_table =
          field_as<std::vector<std::pair<double, double>>>(d["table"], "density.table");
    } else {
      throw ConfigError("config field 'density' must be \"canonical\" or {\"table\": [...]}");
    }
  }

  if (j.contains("fock_level")) c.fock_level = field_as<int>(j["fock_level"], "fock_level");
  if (j.contains("target_tolerance"))
    c.target_tolerance = field_as<double>(j["target_tolerance"], "target_tolerance");

  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    if (!q.is_object()) throw ConfigError("config field 'quadrature' must be an object");
    if (q.contains("radial_rule"))
      c.radial_rule = field_as<std::string>(q["radial_rule"], "quadrature.radial_rule");
    if (q.contains("radial_points"))
      c.radial_points = field_as<int>(q["radial_points"], "quadrature.radial_points");
    if (q.contains("angular_points"))
      c.angular_points = field_as<int>(q["angular_points"], "quadrature.angular_points");
    if (q.contains("t_cutoff")) c.t_cutoff = field_as<double>(q["t_cutoff"], "quadrature.t_cutoff");
  }

  if (j.contains("seed")) c.seed = field_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("samples")) c.samples = field_as<int>(j["samples"], "samples");

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("config field 'tolerances' must be an object");
    auto grab = [&](const char* key, double& slot) {
      if (t.contains(key)) slot = field_as<double>(t[key], std::string("tolerances.") + key);
    };
    grab("identity", c.tol.identity);
    grab("normalization", c.tol.normalization);
    grab("moments", c.tol.moments);
    grab("uncertainty", c.tol.uncertainty);
    grab("expform", c.tol.expform);
    grab("audit", c.tol.audit);
  }

  if (j.contains("moments_m_max"))
    c.moments_m_max = field_as<int>(j["moments_m_max"], "moments_m_max");
  if (j.contains("rotation_x")) c.rotation_x = field_as<double>(j["rotation_x"], "rotation_x");
  if (j.contains("placement")) c.placement = field_as<std::string>(j["placement"], "placement");

  if (j.contains("fault")) {
    const auto& f = j["fault"];
    if (!f.is_object()) throw ConfigError("config field 'fault' must be an object");
    if (f.contains("flip_omega_sign"))
      c.fault_flip_omega = field_as<bool>(f["flip_omega_sign"], "fault.flip_omega_sign");
    if (f.contains("prefactor_scale"))
      c.fault_prefactor_scale =
          field_as<double>(f["prefactor_scale"], "fault.prefactor_scale");
  }
  if (j.contains("output")) c.output = field_as<std::string>(j["output"], "output");
  return c;
}

LabelFamily family_of(const RunConfig& c) {
  if (c.algebra == "quaternion") return LabelFamily::Quaternion;
  if (c.algebra == "octonion-left") return LabelFamily::OctonionLeft;
  if (c.algebra == "octonion-right") return LabelFamily::OctonionRight;
  if (c.algebra == "scalar") return LabelFamily::Scalar;
  throw ConfigError(
      "config field 'algebra' must be one of quaternion, octonion-left, octonion-right, scalar");
}

// element coefficients with the per-algebra default (1,1,...,1)
Eigen::VectorXd element_of(const RunConfig& c, int n) {
  if (c.element.empty()) return Eigen::VectorXd::Ones(n);
  if (static_cast<int>(c.element.size()) != n)
    throw ConfigError("config field 'element' needs " + std::to_string(n) +
                      " coefficients for algebra '" + c.algebra + "', got " +
                      std::to_string(c.element.size()));
  return Eigen::Map<const Eigen::VectorXd>(c.element.data(), n);
}

RhoSequence rho_of(const RunConfig& c, int m_needed) {
  if (c.rho_factorial) return canonical_rho(m_needed);
  return RhoSequence::from_table(c.rho_table, c.rho_radius);
}

DensityFunction density_of(const RunConfig& c) {
  if (c.density_canonical) return canonical_density();
  return DensityFunction::from_table(c.density_table);
}

QuadratureSpec quad_of(const RunConfig& c, const DensityFunction& lambda, int M) {
  QuadratureSpec q;
  const bool finite = std::isfinite(lambda.support_upper());
  if (c.radial_rule == "laguerre") {
    q.radial_rule = RadialRule::GaussLaguerreOnRSubstitution;
  } else if (c.radial_rule == "legendre") {
    q.radial_rule = RadialRule::GaussLegendreTruncated;
  } else if (c.radial_rule == "auto") {
    q.radial_rule =
        finite ? RadialRule::GaussLegendreTruncated : RadialRule::GaussLaguerreOnRSubstitution;
  } else {
    throw ConfigError("config field 'quadrature.radial_rule' must be auto, laguerre or legendre");
  }
  q.radial_points = c.radial_points;
  q.angular_points = c.angular_points > 0 ? c.angular_points : std::max(64, 2 * M + 2);
  if (q.radial_rule == RadialRule::GaussLegendreTruncated) {
    q.t_cutoff = c.t_cutoff > 0 ? c.t_cutoff : (finite ? lambda.support_upper() : 0.0);
    if (!(q.t_cutoff > 0))
      throw ConfigError("config field 'quadrature.t_cutoff' required for the legendre rule");
  }
  return q;
}

int fock_for(const RunConfig& c, const RhoSequence& rho, double t, int command_default) {
  if (c.fock_level >= 0) return c.fock_level;
  if (c.target_tolerance > 0 && rho.kind() == RhoKind::CanonicalFactorial)
    return fock_level_for_tolerance(canonical_rho(160), t, c.target_tolerance);
  if (!c.rho_factorial) return std::min(command_default, rho.m_max());
  return command_default;
}

ordered_json quad_json(const QuadratureSpec& q) {
  ordered_json j;
  j["radial_rule"] = q.radial_rule == RadialRule::GaussLaguerreOnRSubstitution
                         ? "laguerre"
                         : "legendre";
  j["radial_points"] = q.radial_points;
  j["angular_points"] = q.angular_points;
  if (q.radial_rule == RadialRule::GaussLegendreTruncated) j["t_cutoff"] = q.t_cutoff;
  return j;
}

ordered_json report_json(const VerificationReport& r) {
  ordered_json j;
  j["name"] = r.check_name;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["truncation_M"] = r.truncation_M;
  if (r.tail_bound > 0) j["tail_bound"] = r.tail_bound;
  if (r.spectral_estimate > 0) j["spectral_estimate"] = r.spectral_estimate;
  return j;
}

ordered_json config_echo(const RunConfig& c) {
  ordered_json j;
  j["algebra"] = c.algebra;
  j["element"] = c.element;
  j["theta"] = c.theta;
  j["component_j"] = c.component_j;
  if (c.rho_factorial) {
    j["rho"] = "factorial";
  } else {
    j["rho"] = ordered_json{{"table", c.rho_table}};
    if (std::isfinite(c.rho_radius)) j["rho"]["radius"] = c.rho_radius;
  }
  if (c.density_canonical) {
    j["density"] = "canonical";
  } else {
    j["density"] = ordered_json{{"table", c.density_table}};
  }
  j["fock_level"] = c.fock_level;
  if (c.target_tolerance > 0) j["target_tolerance"] = c.target_tolerance;
  j["quadrature"] = {{"radial_rule", c.radial_rule},
                     {"radial_points", c.radial_points},
                     {"angular_points", c.angular_points},
                     {"t_cutoff", c.t_cutoff}};
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["tolerances"] = {{"identity", c.tol.identity},
                     {"normalization", c.tol.normalization},
                     {"moments", c.tol.moments},
                     {"uncertainty", c.tol.uncertainty},
                     {"expform", c.tol.expform},
                     {"audit", c.tol.audit}};
  j["moments_m_max"] = c.moments_m_max;
  j["rotation_x"] = c.rotation_x;
  j["placement"] = c.placement;
  j["fault"] = {{"flip_omega_sign", c.fault_flip_omega},
                {"prefactor_scale", c.fault_prefactor_scale}};
  j["output"] = c.output;
  return j;
}

void print_checks(const std::vector<VerificationReport>& checks) {
  for (const auto& r : checks) {
    std::ostringstream line;
    line.setf(std::ios::scientific);
    line.precision(3);
    line << (r.passed ? "PASS " : "FAIL ") << r.check_name << "  residual " << r.residual
         << "  (tol " << r.tolerance << ")";
    std::cout << line.str() << "\n";
  }
}

std::string timestamp_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int write_report(const RunConfig& c, const std::string& out_flag, const std::string& command,
                 const std::vector<VerificationReport>& checks, const ordered_json& data) {
  ordered_json rep;
  rep["tool"] = "cliffvcs";
  rep["command"] = command;
  rep["config"] = config_echo(c);
  rep["checks"] = ordered_json::array();
  for (const auto& r : checks) rep["checks"].push_back(report_json(r));
  if (!data.is_null()) rep["data"] = data;
  const bool ok = all_passed(checks);
  rep["passed"] = ok;
  rep["timestamp"] = timestamp_utc();  // isolated on its own key, last

  std::filesystem::path out = out_flag.empty() ? c.output : out_flag;
  if (const char* dir = std::getenv("CLIFFVCS_OUT_DIR"); dir && *dir)
    out = std::filesystem::path(dir) / out.filename();
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write report file: " + out.string());
  f << rep.dump(2) << "\n";

  print_checks(checks);
  std::cout << (ok ? "all checks passed" : "CHECKS FAILED") << "; report: " << out.string()
            << "\n";
  return ok ? 0 : 1;
}

// ---- subcommand drivers ----

int run_algebra_check(const RunConfig& c, const std::string& out_flag) {
  AuditFault fault;
  fault.flip_omega_sign = c.fault_flip_omega;
  auto checks = representation_audit(c.samples, c.seed, fault);
  for (auto& r : checks) {
    r.tolerance = c.tol.audit;
    r.passed = r.residual <= r.tolerance;
  }
  ordered_json data;
  data["samples"] = c.samples;
  data["seed"] = c.seed;
  return write_report(c, out_flag, "algebra check", checks, data);
}

// the series state for the configured element, component j
VcsState state_of(const RunConfig& c, LabelFamily family, const RhoSequence& rho, int j, int M) {
  const int n = family_dim(family);
  Eigen::VectorXd coeffs = element_of(c, n);
  const double t = coeffs.norm();
  Eigen::VectorXd x_hat =
      t > 0 ? Eigen::VectorXd(coeffs / t) : detail::direction_for(n, Eigen::VectorXd());
  VcsState s = build_series_vcs(detail::label_matrix(family, x_hat, t, c.theta), rho, j, M);
  if (c.fault_prefactor_scale != 1.0) s.coeffs *= c.fault_prefactor_scale;
  return s;
}

int run_vcs_normalize(const RunConfig& c, const std::string& out_flag) {
  const LabelFamily family = family_of(c);
  const int n = family_dim(family);
  const double t = element_of(c, n).norm();
  RhoSequence probe = rho_of(c, 160);
  const int M = fock_for(c, probe, t, c.rho_factorial
                                          ? fock_level_for_tolerance(probe, t, 1e-13)
                                          : probe.m_max());
  RhoSequence rho = rho_of(c, M);

  double total = 0.0, worst = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double nrm2 = state_of(c, family, rho, j, M).squared_norm();
    total += nrm2;
    worst = std::max(worst, std::abs(nrm2 - 1.0 / n));
  }
  QuadratureSpec none{};
  double tail = 0.0;
  if (rho.kind() == RhoKind::CanonicalFactorial)
    tail = truncation_bound(rho, t, M) * std::exp(-t * t);
  std::vector<VerificationReport> checks{
      make_report("normalization-sum-" + std::string(family_name(family)), std::abs(total - 1.0),
                  c.tol.normalization, none, M, tail),
      make_report("component-norms-" + std::string(family_name(family)), worst,
                  c.tol.normalization, none, M, tail)};
  ordered_json data;
  data["norm_sum"] = total;
  data["fock_level"] = M;
  return write_report(c, out_flag, "vcs normalize", checks, data);
}

int run_vcs_identity(const RunConfig& c, const std::string& out_flag) {
  const LabelFamily family = family_of(c);
  const int M = fock_for(c, rho_of(c, 20), 0.0, family_dim(family) == 8 ? 10 : 15);
  RhoSequence rho = rho_of(c, M);
  DensityFunction lambda = density_of(c);
  QuadratureSpec quad = quad_of(c, lambda, M);
  auto rep = resolve_identity_series(family, rho, lambda, quad, M, quad.angular_points,
                                     c.tol.identity);
  ordered_json data;
  data["quadrature"] = quad_json(quad);
  data["spectral_estimate"] = rep.spectral_estimate;
  return write_report(c, out_flag, "vcs identity", {rep}, data);
}

int run_vcs_uncertainty(const RunConfig& c, const std::string& out_flag) {
  const LabelFamily family = family_of(c);
  const int n = family_dim(family);
  Eigen::VectorXd coeffs = element_of(c, n);
  const double t = coeffs.norm();
  RhoSequence probe = rho_of(c, 160);
  const int M =
      fock_for(c, probe, t, c.rho_factorial ? fock_level_for_tolerance(probe, t, 1e-13)
                                            : probe.m_max());
  RhoSequence rho = rho_of(c, M);
  QuadratureSpec none{};

  auto describe = [](const UncertaintyReport& u) {
    ordered_json j;
    j["mean_q"] = u.mean_q;
    j["mean_p"] = u.mean_p;
    j["delta_q"] = u.delta_q;
    j["delta_p"] = u.delta_p;
    j["product"] = u.product;
    j["saturated"] = u.saturated;
    return j;
  };
  auto print_values = [](const std::string& label, const UncertaintyReport& u) {
    std::ostringstream line;
    line.precision(12);
    line << label << ": <Q> = " << u.mean_q << ", <P> = " << u.mean_p
         << ", dQ = " << u.delta_q << ", dP = " << u.delta_p << ", dQ dP = " << u.product
         << ", saturated: " << (u.saturated ? "true" : "false");
    std::cout << line.str() << "\n";
  };

  std::vector<VerificationReport> checks;
  ordered_json data;
  data["fock_level"] = M;
  data["eigen"] = ordered_json::array();

  // eigen components saturate the uncertainty bound
  if (family == LabelFamily::Scalar) {
    const std::complex<double> z = std::polar(t * (coeffs(0) < 0 ? -1.0 : 1.0), c.theta);
    Eigen::VectorXcd chi = Eigen::VectorXcd::Ones(1);
    auto u = uncertainty(build_eigen_vcs(z, chi, rho, M), rho, c.tol.uncertainty);
    print_values("eigen z", u);
    ordered_json e = describe(u);
    e["z"] = {z.real(), z.imag()};
    data["eigen"].push_back(e);
    checks.push_back(make_report("uncertainty-saturation-eigen", std::abs(u.product - 0.5),
                                 c.tol.uncertainty, none, M));
  } else {
    Algebra tag = family == LabelFamily::Quaternion ? Algebra::Quaternion : Algebra::Octonion;
    AlgebraElement a(tag, coeffs);
    RepMatrix m = apply_phase(family == LabelFamily::Quaternion
                                  ? quat_to_matrix(a)
                                  : (family == LabelFamily::OctonionLeft ? oct_left_matrix(a)
                                                                         : oct_right_matrix(a)),
                              c.theta);
    int idx = 0;
    for (const auto& comp : eigen_split(m, tag)) {
      auto u = uncertainty(build_eigen_vcs(comp.eigenvalue, comp.vectors.col(0), rho, M), rho,
                           c.tol.uncertainty);
      print_values("eigen z" + std::to_string(idx), u);
      ordered_json e = describe(u);
      e["z"] = {comp.eigenvalue.real(), comp.eigenvalue.imag()};
      e["degenerate"] = comp.degenerate;
      data["eigen"].push_back(e);
      checks.push_back(make_report("uncertainty-saturation-eigen-" + std::to_string(idx),
                                   std::abs(u.product - 0.5), c.tol.uncertainty, none, M));
      ++idx;
    }
  }

  // the component state generally does not saturate; reported as data only
  if (family != LabelFamily::Scalar) {
    if (c.component_j < 1 || c.component_j > n)
      throw ConfigError("config field 'component_j' out of 1.." + std::to_string(n));
    auto u = uncertainty(state_of(c, family, rho, c.component_j, M), rho, c.tol.uncertainty);
    print_values("component j=" + std::to_string(c.component_j), u);
    data["component"] = describe(u);
    data["component"]["j"] = c.component_j;
  }
  return write_report(c, out_flag, "vcs uncertainty", checks, data);
}

int run_vcs_expform(const RunConfig& c, const std::string& out_flag) {
  const LabelFamily family = family_of(c);
  if (family == LabelFamily::Scalar)
    throw ConfigError("expform needs a matrix algebra (quaternion or octonion)");
  if (!c.rho_factorial)
    throw ConfigError("expform is defined for the factorial rho sequence only");
  const int n = family_dim(family);
  Eigen::VectorXd coeffs = element_of(c, n);
  const double t = coeffs.norm();
  const int M = c.fock_level >= 0 ? c.fock_level : 50;
  RhoSequence rho = canonical_rho(M);

  Eigen::VectorXd x_hat =
      t > 0 ? Eigen::VectorXd(coeffs / t) : detail::direction_for(n, Eigen::VectorXd());
  RepMatrix m = detail::label_matrix(family, x_hat, t, c.theta);

  double worst = 0.0;
  for (int j = 1; j <= n; ++j) {
    auto series = build_series_vcs(m, rho, j, M);
    auto expo = build_exponential_vcs(m, j, M);
    worst = std::max(worst, (series.coeffs - expo.coeffs).cwiseAbs().maxCoeff());
  }
  QuadratureSpec none{};
  const double tail = truncation_bound(rho, t, M) / std::sqrt(n * std::exp(t * t));
  std::vector<VerificationReport> checks{
      make_report("exponential-form-distance-" + std::string(family_name(family)), worst,
                  c.tol.expform, none, M, tail)};
  ordered_json data;
  data["fock_level"] = M;
  data["max_distance"] = worst;
  return write_report(c, out_flag, "vcs expform", checks, data);
}

int run_vcs_matrix_moment(const RunConfig& c, const std::string& out_flag) {
  const LabelFamily family = family_of(c);
  if (family == LabelFamily::Scalar)
    throw ConfigError("matrix-moment needs a matrix algebra (quaternion or octonion)");
  const int n = family_dim(family);
  Eigen::VectorXd coeffs = element_of(c, n);
  const double t = coeffs.norm();
  const MomentPlacement placement =
      c.placement == "right" ? MomentPlacement::RRight : MomentPlacement::RLeft;

  const int M_norm = c.fock_level >= 0 ? c.fock_level : 45;
  const int M_id = c.fock_level >= 0 ? c.fock_level : 12;

  Eigen::VectorXd x_hat =
      t > 0 ? Eigen::VectorXd(coeffs / t) : detail::direction_for(n, Eigen::VectorXd());
  RepMatrix z = detail::label_matrix(family, x_hat, t, c.theta);
  MatrixMomentSequence seq = rotation_moment_sequence(c.rotation_x, n);

  // normalization factor: partial sum against the closed form n e^{t^2}
  MatrixMomentSequence partial = seq;
  partial.closed_norm_sum = nullptr;
  const double closed = n * std::exp(t * t);
  const double partial_nf = build_matrix_moment_vcs(z, partial, 1, M_norm, placement)
                                .meta.norm_factor;
  QuadratureSpec none{};
  std::vector<VerificationReport> checks;
  checks.push_back(make_report("matrix-moment-normalization-factor",
                               std::abs(partial_nf - closed) / closed, 1e-12, none, M_norm));

  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    total += build_matrix_moment_vcs(z, seq, j, M_norm, placement).squared_norm();
  checks.push_back(make_report("matrix-moment-normalization-sum", std::abs(total - 1.0),
                               c.tol.normalization, none, M_norm));

  DensityFunction lambda = canonical_density();
  QuadratureSpec quad = quad_of(c, lambda, M_id);
  auto rep = resolve_identity_matrix_moment(family, c.rotation_x, quad, M_id, c.tol.identity,
                                            placement);
  checks.push_back(rep);

  auto rep_x0 = resolve_identity_matrix_moment(family, 0.0, quad, M_id, c.tol.identity,
                                               placement);
  checks.push_back(make_report("matrix-moment-rotation-independence",
                               std::abs(rep.residual - rep_x0.residual), 1e-12, quad, M_id));

  ordered_json data;
  data["normalization_factor"] = partial_nf;
  data["closed_form"] = closed;
  data["rotation_x"] = c.rotation_x;
  data["placement"] = c.placement;
  return write_report(c, out_flag, "vcs matrix-moment", checks, data);
}

int run_moments_verify(const RunConfig& c, const std::string& out_flag) {
  RhoSequence rho = rho_of(c, std::max(c.moments_m_max, 20));
  DensityFunction lambda = density_of(c);
  QuadratureSpec quad = quad_of(c, lambda, 0);
  std::vector<MomentCheck> rows;
  try {
    rows = verify_moments(lambda, rho, c.moments_m_max, quad);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  double worst = 0.0;
  ordered_json data;
  data["moments"] = ordered_json::array();
  for (const auto& row : rows) {
    worst = std::max(worst, row.relative_error);
    data["moments"].push_back({{"m", row.m},
                               {"integral", row.integral},
                               {"target", row.target},
                               {"relative_error", row.relative_error}});
  }
  data["quadrature"] = quad_json(quad);
  std::vector<VerificationReport> checks{make_report(
      "moment-conditions", worst, c.tol.moments, quad, c.moments_m_max)};
  return write_report(c, out_flag, "moments verify", checks, data);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherent states over Clifford matrix representations"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::optional<std::uint64_t> seed_flag;
  std::optional<double> tol_flag;
  std::optional<int> fock_flag;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_flag, "report output path (overrides config)");
  app.add_option("--seed", seed_flag, "RNG seed (overrides config)");
  app.add_option("--tol", tol_flag, "override every tolerance");
  app.add_option("--fock", fock_flag, "Fock truncation level (overrides config)");

  auto* algebra = app.add_subcommand("algebra", "representation-layer checks");
  auto* algebra_check = algebra->add_subcommand("check", "randomized invariant audit");
  algebra->require_subcommand(1);

  auto* vcs_cmd = app.add_subcommand("vcs", "coherent-state checks");
  auto* vcs_normalize = vcs_cmd->add_subcommand("normalize", "component norms sum to one");
  auto* vcs_identity = vcs_cmd->add_subcommand("identity", "resolution of the identity");
  auto* vcs_uncertainty = vcs_cmd->add_subcommand("uncertainty", "quadrature dispersions");
  auto* vcs_expform = vcs_cmd->add_subcommand("expform", "series vs displacement form");
  auto* vcs_matrix_moment =
      vcs_cmd->add_subcommand("matrix-moment", "rotation-block moment family");
  vcs_cmd->require_subcommand(1);

  auto* moments_cmd = app.add_subcommand("moments", "radial moment conditions");
  auto* moments_verify_cmd = moments_cmd->add_subcommand("verify", "density-vs-rho moments");
  moments_cmd->require_subcommand(1);

  // let --config/--out/--seed/--tol/--fock appear after the subcommand too
  for (CLI::App* sub : {algebra, algebra_check, vcs_cmd, vcs_normalize, vcs_identity,
                        vcs_uncertainty, vcs_expform, vcs_matrix_moment, moments_cmd,
                        moments_verify_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig config = parse_config(config_path);
    if (seed_flag) config.seed = *seed_flag;
    if (fock_flag) config.fock_level = *fock_flag;
    if (tol_flag) {
      config.tol.identity = config.tol.normalization = config.tol.moments =
          config.tol.uncertainty = config.tol.expform = config.tol.audit = *tol_flag;
    }

    if (algebra_check->parsed()) return run_algebra_check(config, out_flag);
    if (vcs_normalize->parsed()) return run_vcs_normalize(config, out_flag);
    if (vcs_identity->parsed()) return run_vcs_identity(config, out_flag);
    if (vcs_uncertainty->parsed()) return run_vcs_uncertainty(config, out_flag);
    if (vcs_expform->parsed()) return run_vcs_expform(config, out_flag);
    if (vcs_matrix_moment->parsed()) return run_vcs_matrix_moment(config, out_flag);
    if (moments_verify_cmd->parsed()) return run_moments_verify(config, out_flag);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
