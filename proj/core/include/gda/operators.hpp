#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "gda/games.hpp"
#include "gda/linalg.hpp"

namespace gda::operators {

using games::QuadraticGame;
using linalg::Matrix;
using linalg::Vector;

enum class Algorithm { SimGda, AltGda, Eg, OgdaSim, OgdaAlt, Nm };

const char* algorithm_name(Algorithm a);  // "sim-gda", "alt-gda", ...
Algorithm parse_algorithm(const std::string& name);

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::SimGda;
  double eta = 0.0;
  std::optional<double> beta;  // present iff algorithm == Nm, in (-1, 0]

  void validate() const;  // throws ParameterError
};

// Plain operators act on z = (x, y); augmented ones act on (z_t, z_{t-1}).
enum class StateLayout { Plain, Augmented };

struct UpdateOperator {
  Matrix matrix;
  StateLayout layout = StateLayout::Plain;
  AlgorithmConfig config;
  games::Provenance game_ref;
  int game_dim = 0;  // d + p

  int dim() const { return matrix.rows(); }
};

// z_{t+1} = (I - eta J) z_t.
UpdateOperator sim_operator(const QuadraticGame& g, double eta);

// x first, then y against the fresh x:
//   [[I - eta A, -eta B], [eta B'(I - eta A), I - eta C - eta^2 B'B]]
// equals the two-factor form [[I,0],[eta B', I-eta C]] [[I-eta A, -eta B],[0,I]].
UpdateOperator alt_operator(const QuadraticGame& g, double eta);

// Opposite factor order; same eigen-spectrum as alt_operator.
UpdateOperator alt_operator_reversed(const QuadraticGame& g, double eta);

// Extragradient: z_{t+1} = z_t - eta J (z_t - eta J z_t) = (I - eta J + eta^2 J^2) z_t.
UpdateOperator eg_operator(const QuadraticGame& g, double eta);

// Optimistic GDA, simultaneous: z_{t+1} = z_t - 2 eta V(z_t) + eta V(z_{t-1});
// companion [[I - 2 eta J, eta J], [I, 0]].
UpdateOperator ogda_sim_operator(const QuadraticGame& g, double eta);

// Optimistic GDA, alternating: the y half-step uses the freshly computed
// x_{t+1}. Built by block-row substitution, not a hand-expanded closed form.
UpdateOperator ogda_alt_operator(const QuadraticGame& g, double eta);

// Negative momentum (simultaneous): z_{t+1} = z_t - eta V(z_t) + beta (z_t - z_{t-1});
// companion [[(1 + beta) I - eta J, -beta I], [I, 0]]. beta in (-1, 0].
UpdateOperator nm_operator(const QuadraticGame& g, double eta, double beta);

UpdateOperator build_operator(const QuadraticGame& g, const AlgorithmConfig& config);

Vector apply(const UpdateOperator& op, const Vector& state);

// The two sequential half updates of Alt-GDA; equals one application of
// alt_operator on the plain state.
std::pair<Vector, Vector> half_step_alt(const QuadraticGame& g, double eta,
                                        const Vector& x, const Vector& y);

// Augmented warm start: z_{-1} := z_0.
Vector augment_state(const Vector& z0);

// Header line naming algorithm, eta, beta, layout, then the matrix text format.
void write_operator(std::ostream& os, const UpdateOperator& op);

// Raw builders without eta validation (eta = 0 allowed; used by tests and the
// eta -> 0 limits).
namespace detail {
Matrix sim_matrix(const QuadraticGame& g, double eta);
Matrix alt_matrix(const QuadraticGame& g, double eta);
Matrix alt_matrix_reversed(const QuadraticGame& g, double eta);
Matrix alt_matrix_two_factor(const QuadraticGame& g, double eta);
Matrix eg_matrix(const QuadraticGame& g, double eta);
Matrix ogda_sim_matrix(const QuadraticGame& g, double eta);
Matrix ogda_alt_matrix(const QuadraticGame& g, double eta);
Matrix nm_matrix(const QuadraticGame& g, double eta, double beta);
}  // namespace detail

}  // namespace gda::operators
