#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gda/linalg.hpp"

namespace gda::games {

using linalg::Matrix;
using linalg::Vector;

struct Provenance {
  std::string generator = "manual";
  std::string params = "-";
  std::uint64_t seed = 0;
};

// Quadratic minimax game  min_x max_y  (1/2) x'Ax + x'By - (1/2) y'Cy
// with A (d x d) and C (p x p) symmetric positive semi-definite. There are no
// linear terms; the equilibrium is canonically the origin.
struct QuadraticGame {
  Matrix a;
  Matrix b;
  Matrix c;
  Provenance provenance;

  int d() const { return b.rows(); }
  int p() const { return b.cols(); }
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;       // eigenvalues >= -kPsdTol
inline constexpr double kPositiveTol = 1e-10;  // "strictly positive" threshold

// Validates symmetry, PSD-ness (up to tolerance), shapes, finiteness.
QuadraticGame make_game(Matrix a, Matrix b, Matrix c, Provenance prov = {});
QuadraticGame scalar_game(double a, double b, double c);
void validate_game(const QuadraticGame& g);

struct ClassBounds {
  double mu_x = 0, mu_y = 0;    // min eigenvalues of A, C (clamped at 0)
  double l_x = 0, l_y = 0;      // max eigenvalues of A, C
  double mu_xy = 0, l_xy = 0;   // extremal singular values of B
  double l = 0;                 // max{l_x, l_y, l_xy}
  double mu = 0;                // min{mu_x, mu_y}
  // Ratios are absent (not infinity) when the denominator vanishes.
  std::optional<double> kappa, kappa_x, kappa_y, kappa_xy;
};

enum class Regime { Bilinear, Scsc, StrongConcaveOnly, General };

const char* regime_name(Regime r);

ClassBounds class_bounds(const QuadraticGame& g);
Regime classify(const QuadraticGame& g);
Regime classify(const QuadraticGame& g, const ClassBounds& bounds);

// J = [[A, B], [-B', C]], the Jacobian of the gradient vector field
// V(x, y) = (Ax + By, Cy - B'x).
Matrix game_jacobian(const QuadraticGame& g);

// kappa = max|lambda| / min Re(lambda) over Sp(J). Throws ConditioningError
// when min Re(lambda) <= 1e-12.
double condition_number_empirical(const QuadraticGame& g);

// The origin; unique equilibrium whenever J is nonsingular, and the canonical
// representative otherwise.
std::pair<Vector, Vector> equilibrium(const QuadraticGame& g);

// Delta = ||x - x*||^2 + ||y - y*||^2.
double distance_to_equilibrium(const QuadraticGame& g, const Vector& x, const Vector& y);

// Containment of Sp(J) in K = { |lambda| <= sqrt(2) L, Re lambda >= mu }.
struct SetKMargin {
  std::complex<double> value;
  double re_margin = 0;   // Re(lambda) - mu
  double mod_margin = 0;  // sqrt(2) L - |lambda|
  bool violated = false;  // margin below -1e-8
};

struct SetKReport {
  double mu = 0;
  double l = 0;
  std::vector<SetKMargin> margins;
  bool pass = true;
};

// Requires the strongly-convex strongly-concave regime (mu > 0).
SetKReport check_set_k(const QuadraticGame& g);

// A, C diagonal with eigenvalue multiset {1/i : i = 1..dim} (descending on
// the diagonal, same ordering for both); B i.i.d. Gaussian(0, coupling_std^2)
// from SplitMix64(seed). With conjugate=true, each player's basis is rotated
// by an independent seeded orthogonal matrix.
QuadraticGame gen_scsc(int dim, std::uint64_t seed, double coupling_std,
                       bool conjugate = false);

// A, C diagonal with eigenvalues 1/n_i, n_i linearly spaced on [1, n_max];
// B standard normal, normalized so sigma_max(B) = 1 within 1e-12.
QuadraticGame gen_scaling_instance(int dim, double n_max, std::uint64_t seed);

// A = 0, C = 0; B i.i.d. standard normal, or fixed_coupling * I when given.
QuadraticGame gen_bilinear(int d, int p, std::uint64_t seed,
                           std::optional<double> fixed_coupling = {});

// A diagonal PSD singular (first eigenvalue 0), C diagonal PD, B full row
// rank (requires p >= d; resamples up to 100 times, then GenerationError).
QuadraticGame gen_strong_concave_only(int d, int p, std::uint64_t seed);

// Game container format: magic line, dims, provenance, then the three matrix
// blocks in the linalg text format.
void write_game(std::ostream& os, const QuadraticGame& g);
QuadraticGame read_game(std::istream& is);

}  // namespace gda::games
