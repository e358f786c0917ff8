#include "gda/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gda/errors.hpp"

namespace gda::spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEtaCeilingTol = 1e-12;

struct SplitSpectrum {
  std::vector<std::complex<double>> real_eigs;
  std::vector<std::complex<double>> complex_eigs;
};

SplitSpectrum split(const linalg::Spectrum& spec) {
  SplitSpectrum out;
  for (const auto& v : spec.values) {
    if (linalg::is_real_eigenvalue(v))
      out.real_eigs.push_back(v);
    else
      out.complex_eigs.push_back(v);
  }
  return out;
}

// Roots of x^2 - p x - q, the characteristic polynomial of the per-eigenvalue
// companion block [[p, q], [1, 0]].
std::pair<std::complex<double>, std::complex<double>> companion_roots(
    const std::complex<double>& p, const std::complex<double>& q) {
  const std::complex<double> s = std::sqrt(p * p + 4.0 * q);
  const std::complex<double> t = std::abs(p + s) >= std::abs(p - s) ? p + s : p - s;
  const std::complex<double> r1 = 0.5 * t;
  if (std::abs(r1) == 0.0) return {r1, p};
  return {r1, -q / r1};
}

void sort_like_spectrum(std::vector<std::complex<double>>& values) {
  std::sort(values.begin(), values.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              const double mx = std::abs(x), my = std::abs(y);
              if (mx != my) return mx > my;
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
}

// Per-eigenvalue checks against a (real bound, complex bound) pair on moduli.
TheoremBounds bounded_check(TheoremId id, const SpectralReport& report, double real_bound,
                            double complex_bound, double eta_max,
                            std::optional<double> corollary_bound) {
  TheoremBounds out;
  out.theorem_id = id;
  out.real_bound = real_bound;
  out.complex_bound = complex_bound;
  out.eta_max = eta_max;
  out.corollary_bound = corollary_bound;
  double min_slack = kInf;
  for (const auto& v : report.spectrum.values) {
    EigenvalueCheck ec;
    ec.value = v;
    ec.modulus = std::abs(v);
    ec.is_real = linalg::is_real_eigenvalue(v);
    ec.bound = ec.is_real ? real_bound : complex_bound;
    ec.slack = ec.bound - ec.modulus;
    ec.violated = ec.slack < -kBoundTol;
    min_slack = std::min(min_slack, ec.slack);
    if (ec.violated) out.pass = false;
    out.checks.push_back(ec);
  }
  out.slack = min_slack;
  if (corollary_bound && report.rho > *corollary_bound + kBoundTol) out.pass = false;
  return out;
}

games::ClassBounds require_regime(const QuadraticGame& g, games::Regime want,
                                  const char* checker) {
  auto bounds = games::class_bounds(g);
  const auto got = games::classify(g, bounds);
  if (got != want)
    throw RegimeError(std::string(checker) + ": requires a " + games::regime_name(want) +
                      " game, got " + games::regime_name(got));
  return bounds;
}

void require_eta_ceiling(double eta, double eta_max, const char* checker) {
  if (!(eta > 0.0)) throw ParameterError(std::string(checker) + ": eta must be positive");
  if (eta > eta_max + kEtaCeilingTol)
    throw ParameterError(std::string(checker) + ": eta exceeds validity ceiling eta_max = " +
                         linalg::format_double(eta_max));
}

bool at_prescribed_step(double eta, double prescribed) {
  return std::abs(eta - prescribed) <= 1e-12 * std::max(1.0, prescribed);
}

}  // namespace

const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::BilinearSim: return "bilinear_sim";
    case TheoremId::BilinearAlt: return "bilinear_alt";
    case TheoremId::SimScsc: return "sim_scsc";
    case TheoremId::AltScsc: return "alt_scsc";
    case TheoremId::SimNoSc: return "sim_nosc";
    case TheoremId::AltNoSc: return "alt_nosc";
  }
  return "alt_scsc";
}

TheoremId parse_theorem(const std::string& name) {
  if (name == "bilinear_sim") return TheoremId::BilinearSim;
  if (name == "bilinear_alt") return TheoremId::BilinearAlt;
  if (name == "sim_scsc") return TheoremId::SimScsc;
  if (name == "alt_scsc") return TheoremId::AltScsc;
  if (name == "sim_nosc") return TheoremId::SimNoSc;
  if (name == "alt_nosc") return TheoremId::AltNoSc;
  throw ParameterError("unknown theorem '" + name + "'");
}

SpectralReport analyze(const QuadraticGame& g, const AlgorithmConfig& config) {
  const auto op = operators::build_operator(g, config);
  SpectralReport report;
  report.spectrum = linalg::eigenvalues(op.matrix);
  report.rho = std::abs(report.spectrum.values.front());
  auto s = split(report.spectrum);
  report.real_eigs = std::move(s.real_eigs);
  report.complex_eigs = std::move(s.complex_eigs);
  report.config = config;
  return report;
}

std::pair<std::complex<double>, std::complex<double>> alt_bilinear_roots(double lambda,
                                                                         double eta) {
  // (x - 1)^2 + eta^2 lambda x = x^2 - (2 - eta^2 lambda) x + 1
  return companion_roots(std::complex<double>(2.0 - eta * eta * lambda, 0.0),
                         std::complex<double>(-1.0, 0.0));
}

TheoremBounds check_bilinear(const QuadraticGame& g, double eta, Algorithm algo) {
  require_regime(g, games::Regime::Bilinear, "check_bilinear");
  if (!(eta > 0.0)) throw ParameterError("check_bilinear: eta must be positive");
  if (algo != Algorithm::SimGda && algo != Algorithm::AltGda)
    throw ParameterError("check_bilinear: algo must be sim-gda or alt-gda");

  // Sp(B'B) through singular values; coordinates outside the coupling range
  // contribute eigenvalue 0 whenever B is not square.
  std::vector<double> lambdas;
  if (g.b.max_abs() != 0.0)
    for (double s : linalg::singular_values(g.b)) lambdas.push_back(s * s);
  if (g.d() != g.p() || lambdas.empty()) lambdas.push_back(0.0);
  const double sigma_max = lambdas.empty() ? 0.0 : std::sqrt(lambdas.front());

  const auto report = analyze(g, {algo, eta, {}});

  if (algo == Algorithm::SimGda) {
    TheoremBounds out;
    out.theorem_id = TheoremId::BilinearSim;
    out.eta_max = kInf;
    const double radius = std::sqrt(1.0 + eta * eta * sigma_max * sigma_max);
    out.real_bound = radius;
    out.complex_bound = radius;
    double min_slack = kInf;
    for (const auto& v : report.spectrum.values) {
      EigenvalueCheck ec;
      ec.value = v;
      ec.modulus = std::abs(v);
      ec.is_real = linalg::is_real_eigenvalue(v);
      // Squared modulus must match 1 + eta^2 lambda for some lambda in Sp(B'B).
      double best = kInf;
      for (double l : lambdas)
        best = std::min(best, std::abs(ec.modulus * ec.modulus - (1.0 + eta * eta * l)));
      ec.bound = radius;
      ec.slack = -best;
      ec.violated = best > kBoundTol;
      min_slack = std::min(min_slack, ec.slack);
      if (ec.violated) out.pass = false;
      out.checks.push_back(ec);
    }
    out.slack = min_slack;
    return out;
  }

  TheoremBounds out;
  out.theorem_id = TheoremId::BilinearAlt;
  out.real_bound = 1.0;
  out.complex_bound = 1.0;
  out.eta_max = sigma_max > 0.0 ? 1.0 / sigma_max : kInf;
  if (eta <= out.eta_max + kEtaCeilingTol) {
    double min_slack = kInf;
    for (const auto& v : report.spectrum.values) {
      EigenvalueCheck ec;
      ec.value = v;
      ec.modulus = std::abs(v);
      ec.is_real = linalg::is_real_eigenvalue(v);
      ec.bound = 1.0;
      ec.slack = 1.0 - ec.modulus;
      ec.violated = ec.modulus > 1.0 + 1e-10;
      min_slack = std::min(min_slack, ec.slack);
      if (ec.violated) out.pass = false;
      out.checks.push_back(ec);
    }
    out.slack = min_slack;
  }
  return out;
}

TheoremBounds check_sim_scsc(const QuadraticGame& g, double eta) {
  const auto cb = require_regime(g, games::Regime::Scsc, "check_sim_scsc");
  if (!(eta > 0.0)) throw ParameterError("check_sim_scsc: eta must be positive");
  const auto report = analyze(g, {Algorithm::SimGda, eta, {}});

  // rho^2 <= 1 - 2 eta mu + 2 eta^2 L^2, valid for every eta > 0 because
  // Sp(J) is contained in the set K.
  const double rho_sq_bound = 1.0 - 2.0 * eta * cb.mu + 2.0 * eta * eta * cb.l * cb.l;
  const double radius = std::sqrt(std::max(0.0, rho_sq_bound));

  TheoremBounds out;
  out.theorem_id = TheoremId::SimScsc;
  out.real_bound = radius;
  out.complex_bound = radius;
  out.eta_max = kInf;
  double min_slack = kInf;
  for (const auto& v : report.spectrum.values) {
    EigenvalueCheck ec;
    ec.value = v;
    ec.modulus = std::abs(v);
    ec.is_real = linalg::is_real_eigenvalue(v);
    ec.bound = radius;
    ec.slack = radius - ec.modulus;
    ec.violated = ec.modulus * ec.modulus > rho_sq_bound + kBoundTol;
    min_slack = std::min(min_slack, ec.slack);
    if (ec.violated) out.pass = false;
    out.checks.push_back(ec);
  }
  out.slack = min_slack;
  // At eta = mu / (2 L^2) the bound specializes to rho^2 <= 1 - 1/(2 kappa^2).
  if (at_prescribed_step(eta, cb.mu / (2.0 * cb.l * cb.l))) {
    const double kappa = cb.l / cb.mu;
    const double rate_sq = 1.0 - 1.0 / (2.0 * kappa * kappa);
    out.corollary_bound = std::sqrt(std::max(0.0, rate_sq));
    if (report.rho * report.rho > rate_sq + kBoundTol) out.pass = false;
  }
  return out;
}

TheoremBounds check_alt_scsc(const QuadraticGame& g, double eta) {
  const auto cb = require_regime(g, games::Regime::Scsc, "check_alt_scsc");
  const double eta_max = 1.0 / (2.0 * cb.l);
  require_eta_ceiling(eta, eta_max, "check_alt_scsc");
  const auto report = analyze(g, {Algorithm::AltGda, eta, {}});

  const double real_bound = std::max(1.0 - eta * cb.mu_x, 1.0 - eta * cb.mu_y);
  const double complex_bound = std::sqrt((1.0 - eta * cb.mu_x) * (1.0 - eta * cb.mu_y));
  std::optional<double> corollary;
  if (at_prescribed_step(eta, eta_max)) corollary = 1.0 - cb.mu / (2.0 * cb.l);
  auto out = bounded_check(TheoremId::AltScsc, report, real_bound, complex_bound, eta_max,
                           corollary);
  return out;
}

TheoremBounds check_sim_nosc(const QuadraticGame& g, double eta) {
  const auto cb = require_regime(g, games::Regime::StrongConcaveOnly, "check_sim_nosc");
  const double eta_max = 1.0 / cb.l;
  require_eta_ceiling(eta, eta_max, "check_sim_nosc");
  const auto report = analyze(g, {Algorithm::SimGda, eta, {}});

  const double real_bound =
      std::max(1.0 - (eta / cb.l) * cb.mu_xy * cb.mu_xy, 1.0 - eta * cb.mu_y);
  const double complex_bound =
      std::sqrt(1.0 - eta * cb.mu_y + 2.0 * eta * eta * cb.l * cb.l);
  std::optional<double> corollary;
  if (at_prescribed_step(eta, cb.mu_y / (4.0 * cb.l * cb.l))) {
    const double ky = cb.l / cb.mu_y;
    const double kxy = cb.l / cb.mu_xy;
    corollary = 1.0 - 1.0 / (16.0 * std::max(ky * kxy * kxy, ky * ky));
  }
  return bounded_check(TheoremId::SimNoSc, report, real_bound, complex_bound, eta_max,
                       corollary);
}

TheoremBounds check_alt_nosc(const QuadraticGame& g, double eta) {
  const auto cb = require_regime(g, games::Regime::StrongConcaveOnly, "check_alt_nosc");
  const double eta_max = 1.0 / (2.0 * cb.l);
  require_eta_ceiling(eta, eta_max, "check_alt_nosc");
  const auto report = analyze(g, {Algorithm::AltGda, eta, {}});

  const double real_bound =
      std::max(1.0 - eta * eta * cb.mu_xy * cb.mu_xy, 1.0 - eta * cb.mu_y);
  const double complex_bound = std::sqrt(1.0 - eta * cb.mu_y);
  std::optional<double> corollary;
  if (at_prescribed_step(eta, eta_max)) {
    const double ky = cb.l / cb.mu_y;
    const double kxy = cb.l / cb.mu_xy;
    corollary = 1.0 - 1.0 / (4.0 * std::max(kxy * kxy, ky));
  }
  return bounded_check(TheoremId::AltNoSc, report, real_bound, complex_bound, eta_max,
                       corollary);
}

TheoremBounds check_theorem(const QuadraticGame& g, double eta, TheoremId id) {
  switch (id) {
    case TheoremId::BilinearSim: return check_bilinear(g, eta, Algorithm::SimGda);
    case TheoremId::BilinearAlt: return check_bilinear(g, eta, Algorithm::AltGda);
    case TheoremId::SimScsc: return check_sim_scsc(g, eta);
    case TheoremId::AltScsc: return check_alt_scsc(g, eta);
    case TheoremId::SimNoSc: return check_sim_nosc(g, eta);
    case TheoremId::AltNoSc: return check_alt_nosc(g, eta);
  }
  throw ParameterError("check_theorem: unknown theorem id");
}

std::vector<double> default_eta_grid() { return linalg::logspace(1e-4, 1.0, 200); }

std::vector<double> default_beta_grid() { return linalg::linspace(-0.98, 0.0, 50); }

bool has_jacobian_map(Algorithm a) {
  switch (a) {
    case Algorithm::SimGda:
    case Algorithm::Eg:
    case Algorithm::OgdaSim:
    case Algorithm::Nm:
      return true;
    case Algorithm::AltGda:
    case Algorithm::OgdaAlt:
      return false;
  }
  return false;
}

linalg::Spectrum spectrum_from_jacobian(const linalg::Spectrum& jacobian_spectrum,
                                        const AlgorithmConfig& config) {
  if (!has_jacobian_map(config.algorithm))
    throw ParameterError("spectrum_from_jacobian: operator is not a function of J alone");
  const double eta = config.eta;
  linalg::Spectrum out;
  std::vector<std::complex<double>> values;
  for (const auto& l : jacobian_spectrum.values) {
    switch (config.algorithm) {
      case Algorithm::SimGda:
        values.push_back(1.0 - eta * l);
        break;
      case Algorithm::Eg:
        values.push_back(1.0 - eta * l + eta * eta * l * l);
        break;
      case Algorithm::OgdaSim: {
        // Block [[1 - 2 eta l, eta l], [1, 0]]: x^2 - (1 - 2 eta l) x - eta l.
        const auto [r1, r2] = companion_roots(1.0 - 2.0 * eta * l, eta * l);
        values.push_back(r1);
        values.push_back(r2);
        break;
      }
      case Algorithm::Nm: {
        // Block [[1 + beta - eta l, -beta], [1, 0]]: x^2 - (1+beta-eta l) x + beta.
        const double beta = config.beta.value();
        const auto [r1, r2] = companion_roots(1.0 + beta - eta * l,
                                              std::complex<double>(-beta, 0.0));
        values.push_back(r1);
        values.push_back(r2);
        break;
      }
      default:
        break;
    }
  }
  sort_like_spectrum(values);
  out.values = std::move(values);
  out.source_dim = static_cast<int>(out.values.size());
  return out;
}

TuneResult tune(const QuadraticGame& g, Algorithm algo, const std::vector<double>& eta_grid,
                const std::vector<double>& beta_grid) {
  if (eta_grid.empty()) throw ParameterError("tune: eta grid must be non-empty");
  for (double e : eta_grid)
    if (!(e > 0.0)) throw ParameterError("tune: eta grid values must be positive");
  std::vector<std::optional<double>> betas;
  if (algo == Algorithm::Nm) {
    if (beta_grid.empty()) throw ParameterError("tune: nm requires a beta grid");
    for (double b : beta_grid) {
      if (!(b > -1.0 && b <= 0.0)) throw ParameterError("tune: beta grid values must be in (-1, 0]");
      betas.emplace_back(b);
    }
  } else {
    if (!beta_grid.empty()) throw ParameterError("tune: beta grid is only meaningful for nm");
    betas.emplace_back(std::nullopt);
  }

  std::optional<linalg::Spectrum> jac_spectrum;
  if (has_jacobian_map(algo)) jac_spectrum = linalg::eigenvalues(games::game_jacobian(g));

  struct Best {
    double rho = kInf;
    AlgorithmConfig config;
    bool found = false;
  } best;
  std::size_t failures = 0, total = 0;

  for (double eta : eta_grid) {
    for (const auto& beta : betas) {
      ++total;
      AlgorithmConfig config{algo, eta, beta};
      double rho = kInf;
      try {
        rho = jac_spectrum
                  ? std::abs(spectrum_from_jacobian(*jac_spectrum, config).values.front())
                  : analyze(g, config).rho;
      } catch (const NumericalError&) {
        ++failures;
        continue;
      }
      // Minimize rho; ties go to smaller eta, then larger beta. Explicit
      // comparison keeps the result invariant to grid ordering.
      const double cand_beta = beta.value_or(0.0);
      const double best_beta = best.config.beta.value_or(0.0);
      const bool better =
          !best.found || rho < best.rho ||
          (rho == best.rho &&
           (eta < best.config.eta ||
            (eta == best.config.eta && cand_beta > best_beta)));
      if (better) {
        best.rho = rho;
        best.config = config;
        best.found = true;
      }
    }
  }
  if (!best.found)
    throw NumericalError("tune: all " + std::to_string(total) + " grid points failed (" +
                         std::to_string(failures) + " numerical failures)");
  return TuneResult{best.config, analyze(g, best.config)};
}

void write_report(std::ostream& os, const SpectralReport& report) {
  os << "gda-spectral-report 1\n";
  os << "algorithm " << operators::algorithm_name(report.config.algorithm) << '\n';
  os << "eta " << linalg::format_double(report.config.eta) << '\n';
  os << "beta "
     << (report.config.beta ? linalg::format_double(*report.config.beta) : std::string("-"))
     << '\n';
  os << "rho " << linalg::format_double(report.rho) << '\n';
  if (report.bounds) {
    const auto& b = *report.bounds;
    os << "theorem " << theorem_name(b.theorem_id) << '\n';
    os << "real_bound " << linalg::format_double(b.real_bound) << '\n';
    os << "complex_bound " << linalg::format_double(b.complex_bound) << '\n';
    os << "eta_max " << linalg::format_double(b.eta_max) << '\n';
    os << "slack " << (b.slack ? linalg::format_double(*b.slack) : std::string("-")) << '\n';
    if (b.corollary_bound)
      os << "corollary_bound " << linalg::format_double(*b.corollary_bound) << '\n';
    os << "pass " << (b.pass ? 1 : 0) << '\n';
  }
  os << "eigenvalues " << report.spectrum.values.size() << '\n';
  os << "re im modulus class bound slack\n";
  const auto row = [&os](const std::complex<double>& v, const char* cls, double bound,
                         double slack) {
    os << linalg::format_double(v.real()) << ' ' << linalg::format_double(v.imag()) << ' '
       << linalg::format_double(std::abs(v)) << ' ' << cls << ' '
       << linalg::format_double(bound) << ' ' << linalg::format_double(slack) << '\n';
  };
  if (report.bounds && !report.bounds->checks.empty()) {
    for (const auto& ec : report.bounds->checks)
      row(ec.value, ec.is_real ? "real" : "complex", ec.bound, ec.slack);
  } else {
    for (const auto& v : report.spectrum.values)
      row(v, linalg::is_real_eigenvalue(v) ? "real" : "complex", 0.0, 0.0);
  }
}

}  // namespace gda::spectral
