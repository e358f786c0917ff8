#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gda/games.hpp"
#include "gda/linalg.hpp"
#include "gda/operators.hpp"

namespace gda::spectral {

using games::QuadraticGame;
using operators::Algorithm;
using operators::AlgorithmConfig;

enum class TheoremId { BilinearSim, BilinearAlt, SimScsc, AltScsc, SimNoSc, AltNoSc };

const char* theorem_name(TheoremId id);  // "bilinear_sim", "alt_scsc", ...
TheoremId parse_theorem(const std::string& name);

struct EigenvalueCheck {
  std::complex<double> value;
  double modulus = 0;
  bool is_real = false;
  double bound = 0;  // modulus bound applied to this eigenvalue
  double slack = 0;  // bound - modulus
  bool violated = false;
};

// Comparisons use absolute tolerance 1e-8 on moduli (squared moduli for the
// BilinearSim identity and the SimScsc radius, which are rho^2 statements).
inline constexpr double kBoundTol = 1e-8;

struct TheoremBounds {
  TheoremId theorem_id = TheoremId::AltScsc;
  double real_bound = 0;
  double complex_bound = 0;
  double eta_max = 0;                  // validity ceiling for eta
  std::optional<double> slack;        // min over eigenvalues, when eta <= eta_max
  std::optional<double> corollary_bound;  // radius bound asserted at the prescribed step
  bool pass = true;
  std::vector<EigenvalueCheck> checks;
};

struct SpectralReport {
  linalg::Spectrum spectrum;
  double rho = 0;
  std::vector<std::complex<double>> real_eigs;
  std::vector<std::complex<double>> complex_eigs;
  AlgorithmConfig config;
  std::optional<TheoremBounds> bounds;
};

// Builds the operator, computes its spectrum, radius and real/complex split.
SpectralReport analyze(const QuadraticGame& g, const AlgorithmConfig& config);

// Section-3 checks on bilinear games. Sim: every eigenvalue's squared modulus
// equals 1 + eta^2 lambda for some lambda in Sp(B'B). Alt: rho <= 1 + 1e-10
// whenever eta <= 1/sigma_max(B).
TheoremBounds check_bilinear(const QuadraticGame& g, double eta, Algorithm algo);

// Roots of (x - 1)^2 + eta^2 lambda x, lambda in Sp(B'B).
std::pair<std::complex<double>, std::complex<double>> alt_bilinear_roots(double lambda,
                                                                         double eta);

// rho^2 <= 1 - 2 eta mu + 2 eta^2 L^2 (valid for every eta > 0); at
// eta = mu / (2 L^2) this is the 1 - 1/(2 kappa^2) rate on rho^2.
TheoremBounds check_sim_scsc(const QuadraticGame& g, double eta);

// eta <= 1/(2L). Real eigenvalues: |l| <= max{1 - eta mu_x, 1 - eta mu_y};
// complex: |l| <= sqrt((1 - eta mu_x)(1 - eta mu_y)). At eta = 1/(2L) also
// rho <= 1 - 1/(2 kappa).
TheoremBounds check_alt_scsc(const QuadraticGame& g, double eta);

// Strong concavity in y only, eta <= 1/L. Real: |l| <= max{1 - (eta/L) mu_xy^2,
// 1 - eta mu_y}; complex: |l| <= sqrt(1 - eta mu_y + 2 eta^2 L^2). At
// eta = mu_y/(4 L^2) also the 1 - 1/(16 max{k_y k_xy^2, k_y^2}) radius bound.
TheoremBounds check_sim_nosc(const QuadraticGame& g, double eta);

// Strong concavity in y only, eta <= 1/(2L). Real: |l| <= max{1 - eta^2 mu_xy^2,
// 1 - eta mu_y}; complex: |l| <= sqrt(1 - eta mu_y). At eta = 1/(2L) also the
// 1 - 1/(4 max{k_xy^2, k_y}) radius bound.
TheoremBounds check_alt_nosc(const QuadraticGame& g, double eta);

TheoremBounds check_theorem(const QuadraticGame& g, double eta, TheoremId id);

struct TuneResult {
  AlgorithmConfig best_config;
  SpectralReport best_report;
};

// Exhaustive grid search minimizing the spectral radius; ties broken by
// smaller eta, then larger beta. Deterministic and grid-order invariant.
//
// For operators that are polynomial functions of the Jacobian alone (Sim-GDA,
// EG, OGDA-Sim, NM) the per-point radius comes from one Jacobian
// eigendecomposition through the exact spectral map below; Alt-GDA and
// OGDA-Alt evaluate the dense operator spectrum. The returned report is
// always recomputed via analyze().
TuneResult tune(const QuadraticGame& g, Algorithm algo, const std::vector<double>& eta_grid,
                const std::vector<double>& beta_grid = {});

// 200 log-spaced points on [1e-4, 1].
std::vector<double> default_eta_grid();
// 50 linear points on [-0.98, 0] (negative momentum only).
std::vector<double> default_beta_grid();

bool has_jacobian_map(Algorithm a);

// Image of a Jacobian spectrum under the given algorithm's per-eigenvalue
// map: 1 - eta l (Sim), 1 - eta l + eta^2 l^2 (EG), and the quadratic-root
// pairs of the OGDA-Sim / NM companion blocks. Exact for every J because the
// companion characteristic polynomial factors through Sp(J).
linalg::Spectrum spectrum_from_jacobian(const linalg::Spectrum& jacobian_spectrum,
                                        const AlgorithmConfig& config);

// One record per eigenvalue (re, im, modulus, class, bound, slack) plus a
// summary block (rho, theorem, pass/fail).
void write_report(std::ostream& os, const SpectralReport& report);

}  // namespace gda::spectral
