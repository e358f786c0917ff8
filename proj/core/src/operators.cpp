#include "gda/operators.hpp"

#include <array>
#include <cmath>
#include <ostream>

#include "gda/errors.hpp"

namespace gda::operators {

namespace {

void require_positive_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw ParameterError("step size eta must be positive and finite");
}

UpdateOperator wrap(Matrix m, StateLayout layout, AlgorithmConfig config,
                    const QuadraticGame& g) {
  UpdateOperator op;
  op.matrix = std::move(m);
  op.layout = layout;
  op.config = std::move(config);
  op.game_ref = g.provenance;
  op.game_dim = g.d() + g.p();
  return op;
}

// A linear map into one state block, written as blocks over the augmented
// state (x_t, y_t, x_{t-1}, y_{t-1}).
using BlockRow = std::array<Matrix, 4>;

BlockRow scale_row(const BlockRow& row, const Matrix& lhs) {
  return {lhs * row[0], lhs * row[1], lhs * row[2], lhs * row[3]};
}

BlockRow add_rows(const BlockRow& a, const BlockRow& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Matrix assemble(const std::array<BlockRow, 4>& rows) {
  Matrix top = Matrix::from_blocks(rows[0][0], rows[0][1], rows[1][0], rows[1][1]);
  Matrix top_r = Matrix::from_blocks(rows[0][2], rows[0][3], rows[1][2], rows[1][3]);
  Matrix bot = Matrix::from_blocks(rows[2][0], rows[2][1], rows[3][0], rows[3][1]);
  Matrix bot_r = Matrix::from_blocks(rows[2][2], rows[2][3], rows[3][2], rows[3][3]);
  return Matrix::from_blocks(top, top_r, bot, bot_r);
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::SimGda: return "sim-gda";
    case Algorithm::AltGda: return "alt-gda";
    case Algorithm::Eg: return "eg";
    case Algorithm::OgdaSim: return "ogda-sim";
    case Algorithm::OgdaAlt: return "ogda-alt";
    case Algorithm::Nm: return "nm";
  }
  return "sim-gda";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "sim-gda" || name == "sim") return Algorithm::SimGda;
  if (name == "alt-gda" || name == "alt") return Algorithm::AltGda;
  if (name == "eg") return Algorithm::Eg;
  if (name == "ogda-sim") return Algorithm::OgdaSim;
  if (name == "ogda-alt") return Algorithm::OgdaAlt;
  if (name == "nm") return Algorithm::Nm;
  throw ParameterError("unknown algorithm '" + name + "'");
}

void AlgorithmConfig::validate() const {
  require_positive_eta(eta);
  if (algorithm == Algorithm::Nm) {
    if (!beta) throw ParameterError("nm requires a momentum value beta");
    if (!(*beta > -1.0 && *beta <= 0.0))
      throw ParameterError("nm momentum beta must lie in (-1, 0]");
  } else if (beta) {
    throw ParameterError("beta is only meaningful for nm");
  }
}

namespace detail {

Matrix sim_matrix(const QuadraticGame& g, double eta) {
  const Matrix id = Matrix::identity(g.d() + g.p());
  return id - games::game_jacobian(g) * eta;
}

Matrix alt_matrix(const QuadraticGame& g, double eta) {
  const Matrix ia = Matrix::identity(g.d()) - g.a * eta;
  const Matrix bt = g.b.transpose();
  return Matrix::from_blocks(ia, -(g.b * eta), (bt * ia) * eta,
                             Matrix::identity(g.p()) - g.c * eta - (bt * g.b) * (eta * eta));
}

Matrix alt_matrix_two_factor(const QuadraticGame& g, double eta) {
  const int d = g.d(), p = g.p();
  const Matrix lower = Matrix::from_blocks(Matrix::identity(d), Matrix::zero(d, p),
                                           g.b.transpose() * eta,
                                           Matrix::identity(p) - g.c * eta);
  const Matrix upper = Matrix::from_blocks(Matrix::identity(d) - g.a * eta, -(g.b * eta),
                                           Matrix::zero(p, d), Matrix::identity(p));
  return lower * upper;
}

Matrix alt_matrix_reversed(const QuadraticGame& g, double eta) {
  const Matrix ic = Matrix::identity(g.p()) - g.c * eta;
  return Matrix::from_blocks(
      Matrix::identity(g.d()) - g.a * eta - (g.b * g.b.transpose()) * (eta * eta),
      -((g.b * ic) * eta), g.b.transpose() * eta, ic);
}

Matrix eg_matrix(const QuadraticGame& g, double eta) {
  const Matrix j = games::game_jacobian(g);
  const Matrix id = Matrix::identity(j.rows());
  return id - j * eta + (j * j) * (eta * eta);
}

Matrix ogda_sim_matrix(const QuadraticGame& g, double eta) {
  const Matrix j = games::game_jacobian(g);
  const int n = j.rows();
  return Matrix::from_blocks(Matrix::identity(n) - j * (2.0 * eta), j * eta,
                             Matrix::identity(n), Matrix::zero(n, n));
}

Matrix ogda_alt_matrix(const QuadraticGame& g, double eta) {
  const int d = g.d(), p = g.p();
  const Matrix bt = g.b.transpose();
  const Matrix zdd = Matrix::zero(d, d), zdp = Matrix::zero(d, p);
  const Matrix zpd = Matrix::zero(p, d), zpp = Matrix::zero(p, p);

  // x_{t+1} = x_t - 2 eta grad_x f(x_t, y_t) + eta grad_x f(x_{t-1}, y_{t-1})
  const BlockRow x_row = {Matrix::identity(d) - g.a * (2.0 * eta), -(g.b * (2.0 * eta)),
                          g.a * eta, g.b * eta};
  // y_{t+1} = y_t + 2 eta grad_y f(x_{t+1}, y_t) - eta grad_y f(x_t, y_{t-1}),
  // with grad_y f(x, y) = B'x - Cy and x_{t+1} substituted from the row above.
  const BlockRow y_base = {-(bt * eta), Matrix::identity(p) - g.c * (2.0 * eta), zpd,
                           g.c * eta};
  const BlockRow y_row = add_rows(scale_row(x_row, bt * (2.0 * eta)), y_base);
  const BlockRow x_prev = {Matrix::identity(d), zdp, zdd, zdp};
  const BlockRow y_prev = {zpd, Matrix::identity(p), zpd, zpp};
  return assemble({x_row, y_row, x_prev, y_prev});
}

Matrix nm_matrix(const QuadraticGame& g, double eta, double beta) {
  const Matrix j = games::game_jacobian(g);
  const int n = j.rows();
  return Matrix::from_blocks(Matrix::identity(n) * (1.0 + beta) - j * eta,
                             Matrix::identity(n) * (-beta), Matrix::identity(n),
                             Matrix::zero(n, n));
}

}  // namespace detail

UpdateOperator sim_operator(const QuadraticGame& g, double eta) {
  require_positive_eta(eta);
  return wrap(detail::sim_matrix(g, eta), StateLayout::Plain, {Algorithm::SimGda, eta, {}}, g);
}

UpdateOperator alt_operator(const QuadraticGame& g, double eta) {
  require_positive_eta(eta);
  return wrap(detail::alt_matrix(g, eta), StateLayout::Plain, {Algorithm::AltGda, eta, {}}, g);
}

UpdateOperator alt_operator_reversed(const QuadraticGame& g, double eta) {
  require_positive_eta(eta);
  return wrap(detail::alt_matrix_reversed(g, eta), StateLayout::Plain,
              {Algorithm::AltGda, eta, {}}, g);
}

UpdateOperator eg_operator(const QuadraticGame& g, double eta) {
  require_positive_eta(eta);
  return wrap(detail::eg_matrix(g, eta), StateLayout::Plain, {Algorithm::Eg, eta, {}}, g);
}

UpdateOperator ogda_sim_operator(const QuadraticGame& g, double eta) {
  require_positive_eta(eta);
  return wrap(detail::ogda_sim_matrix(g, eta), StateLayout::Augmented,
              {Algorithm::OgdaSim, eta, {}}, g);
}

UpdateOperator ogda_alt_operator(const QuadraticGame& g, double eta) {
  require_positive_eta(eta);
  return wrap(detail::ogda_alt_matrix(g, eta), StateLayout::Augmented,
              {Algorithm::OgdaAlt, eta, {}}, g);
}

UpdateOperator nm_operator(const QuadraticGame& g, double eta, double beta) {
  AlgorithmConfig config{Algorithm::Nm, eta, beta};
  config.validate();
  return wrap(detail::nm_matrix(g, eta, beta), StateLayout::Augmented, std::move(config), g);
}

UpdateOperator build_operator(const QuadraticGame& g, const AlgorithmConfig& config) {
  config.validate();
  switch (config.algorithm) {
    case Algorithm::SimGda: return sim_operator(g, config.eta);
    case Algorithm::AltGda: return alt_operator(g, config.eta);
    case Algorithm::Eg: return eg_operator(g, config.eta);
    case Algorithm::OgdaSim: return ogda_sim_operator(g, config.eta);
    case Algorithm::OgdaAlt: return ogda_alt_operator(g, config.eta);
    case Algorithm::Nm: return nm_operator(g, config.eta, *config.beta);
  }
  throw ParameterError("build_operator: unknown algorithm");
}

Vector apply(const UpdateOperator& op, const Vector& state) {
  if (static_cast<int>(state.size()) != op.dim())
    throw DimensionError("apply: state dimension does not match operator layout");
  return op.matrix * state;
}

std::pair<Vector, Vector> half_step_alt(const QuadraticGame& g, double eta, const Vector& x,
                                        const Vector& y) {
  if (static_cast<int>(x.size()) != g.d() || static_cast<int>(y.size()) != g.p())
    throw DimensionError("half_step_alt: point dimensions mismatch");
  // x' = x - eta (Ax + By)
  Vector xn = x;
  {
    const Vector ax = g.a * x;
    const Vector by = g.b * y;
    for (std::size_t i = 0; i < xn.size(); ++i) xn[i] -= eta * (ax[i] + by[i]);
  }
  // y' = y + eta (B'x' - Cy)
  Vector yn = y;
  {
    const Vector btx = g.b.transpose() * xn;
    const Vector cy = g.c * y;
    for (std::size_t i = 0; i < yn.size(); ++i) yn[i] += eta * (btx[i] - cy[i]);
  }
  return {std::move(xn), std::move(yn)};
}

Vector augment_state(const Vector& z0) {
  Vector out;
  out.reserve(z0.size() * 2);
  out.insert(out.end(), z0.begin(), z0.end());
  out.insert(out.end(), z0.begin(), z0.end());
  return out;
}

void write_operator(std::ostream& os, const UpdateOperator& op) {
  os << "algorithm " << algorithm_name(op.config.algorithm) << " eta "
     << linalg::format_double(op.config.eta) << " beta "
     << (op.config.beta ? linalg::format_double(*op.config.beta) : std::string("-"))
     << " layout " << (op.layout == StateLayout::Plain ? "plain" : "augmented") << '\n';
  linalg::write_matrix(os, op.matrix);
}

}  // namespace gda::operators
