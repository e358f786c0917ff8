#include "gda/games.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gda/errors.hpp"
#include "gda/rng.hpp"

namespace gda::games {

namespace {

Matrix gaussian_matrix(SplitMix64& rng, int rows, int cols, double std_dev) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = std_dev * rng.next_gaussian();
  return m;
}

// Orthogonal factor of a Gaussian matrix via Gram-Schmidt, columns sign-fixed
// so the result is a deterministic function of the stream.
Matrix random_orthogonal(SplitMix64& rng, int n) {
  Matrix q = gaussian_matrix(rng, n, n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += q(i, j) * q(i, k);
      for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw GenerationError("random_orthogonal: degenerate draw");
    const double sign = q(0, j) >= 0.0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) q(i, j) *= sign / nrm;
  }
  return q;
}

Matrix symmetrize(const Matrix& m) {
  Matrix out = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + m(j, i));
  return out;
}

std::string format_params(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ' ';
    out += k;
    out += '=';
    out += v;
  }
  return out.empty() ? std::string("-") : out;
}

}  // namespace

QuadraticGame make_game(Matrix a, Matrix b, Matrix c, Provenance prov) {
  QuadraticGame g{std::move(a), std::move(b), std::move(c), std::move(prov)};
  validate_game(g);
  return g;
}

QuadraticGame scalar_game(double a, double b, double c) {
  return make_game(Matrix{{a}}, Matrix{{b}}, Matrix{{c}},
                   Provenance{"scalar", format_params({{"a", linalg::format_double(a)},
                                                       {"b", linalg::format_double(b)},
                                                       {"c", linalg::format_double(c)}}),
                              0});
}

void validate_game(const QuadraticGame& g) {
  if (g.b.rows() < 1 || g.b.cols() < 1)
    throw DimensionError("game: both players need at least one coordinate");
  if (g.a.rows() != g.b.rows() || g.c.rows() != g.b.cols())
    throw DimensionError("game: block dimensions inconsistent");
  if (!g.a.is_square() || !g.c.is_square()) throw DimensionError("game: A and C must be square");
  if (!g.a.all_finite() || !g.b.all_finite() || !g.c.all_finite())
    throw NumericalError("game: non-finite entries");
  if (g.a.asymmetry() > kSymmetryTol || g.c.asymmetry() > kSymmetryTol)
    throw ParameterError("game: A and C must be symmetric within 1e-12");
  if (linalg::symmetric_eig_range(g.a).first < -kPsdTol ||
      linalg::symmetric_eig_range(g.c).first < -kPsdTol)
    throw ParameterError("game: A and C must be positive semi-definite");
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Bilinear: return "bilinear";
    case Regime::Scsc: return "scsc";
    case Regime::StrongConcaveOnly: return "strong-concave-only";
    case Regime::General: return "general";
  }
  return "general";
}

ClassBounds class_bounds(const QuadraticGame& g) {
  ClassBounds out;
  const auto [amin, amax] = linalg::symmetric_eig_range(g.a);
  const auto [cmin, cmax] = linalg::symmetric_eig_range(g.c);
  out.mu_x = std::max(0.0, amin);
  out.mu_y = std::max(0.0, cmin);
  out.l_x = amax;
  out.l_y = cmax;
  if (g.b.max_abs() == 0.0) {
    out.mu_xy = 0.0;
    out.l_xy = 0.0;
  } else {
    const auto sv = linalg::singular_values(g.b);
    out.l_xy = sv.front();
    out.mu_xy = sv.back();
  }
  out.l = std::max({out.l_x, out.l_y, out.l_xy});
  out.mu = std::min(out.mu_x, out.mu_y);
  if (out.mu > kPositiveTol) out.kappa = out.l / out.mu;
  if (out.mu_x > kPositiveTol) out.kappa_x = out.l / out.mu_x;
  if (out.mu_y > kPositiveTol) out.kappa_y = out.l / out.mu_y;
  if (out.mu_xy > kPositiveTol) out.kappa_xy = out.l / out.mu_xy;
  return out;
}

Regime classify(const QuadraticGame& g) { return classify(g, class_bounds(g)); }

Regime classify(const QuadraticGame& g, const ClassBounds& bounds) {
  const bool a_zero = g.a.max_abs() <= 1e-12;
  const bool c_zero = g.c.max_abs() <= 1e-12;
  if (a_zero && c_zero) return Regime::Bilinear;
  if (bounds.mu_x > kPositiveTol && bounds.mu_y > kPositiveTol) return Regime::Scsc;
  // Strong concavity in y only; the theorems additionally need B full row
  // rank, i.e. all d singular values positive, which requires p >= d.
  if (bounds.mu_x <= kPositiveTol && bounds.mu_y > kPositiveTol && g.p() >= g.d() &&
      bounds.mu_xy > kPositiveTol)
    return Regime::StrongConcaveOnly;
  return Regime::General;
}

Matrix game_jacobian(const QuadraticGame& g) {
  return Matrix::from_blocks(g.a, g.b, -(g.b.transpose()), g.c);
}

double condition_number_empirical(const QuadraticGame& g) {
  const auto spec = linalg::eigenvalues(game_jacobian(g));
  double max_mod = 0.0;
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& v : spec.values) {
    max_mod = std::max(max_mod, std::abs(v));
    min_re = std::min(min_re, v.real());
  }
  if (min_re <= 1e-12)
    throw ConditioningError("empirical condition number undefined: min Re(lambda) = " +
                            linalg::format_double(min_re));
  return max_mod / min_re;
}

std::pair<Vector, Vector> equilibrium(const QuadraticGame& g) {
  return {Vector(static_cast<std::size_t>(g.d()), 0.0),
          Vector(static_cast<std::size_t>(g.p()), 0.0)};
}

double distance_to_equilibrium(const QuadraticGame& g, const Vector& x, const Vector& y) {
  if (static_cast<int>(x.size()) != g.d() || static_cast<int>(y.size()) != g.p())
    throw DimensionError("distance_to_equilibrium: point dimensions mismatch");
  return linalg::norm_sq(x) + linalg::norm_sq(y);
}

SetKReport check_set_k(const QuadraticGame& g) {
  const auto bounds = class_bounds(g);
  if (classify(g, bounds) != Regime::Scsc)
    throw RegimeError("check_set_k requires a strongly-convex strongly-concave game");
  SetKReport report;
  report.mu = bounds.mu;
  report.l = bounds.l;
  const double mod_cap = std::sqrt(2.0) * bounds.l;
  for (const auto& v : linalg::eigenvalues(game_jacobian(g)).values) {
    SetKMargin m;
    m.value = v;
    m.re_margin = v.real() - bounds.mu;
    m.mod_margin = mod_cap - std::abs(v);
    m.violated = m.re_margin < -1e-8 || m.mod_margin < -1e-8;
    if (m.violated) report.pass = false;
    report.margins.push_back(m);
  }
  return report;
}

QuadraticGame gen_scsc(int dim, std::uint64_t seed, double coupling_std, bool conjugate) {
  if (dim < 1) throw ParameterError("gen_scsc: dim must be >= 1");
  if (coupling_std < 0.0) throw ParameterError("gen_scsc: coupling_std must be >= 0");
  SplitMix64 rng(seed);
  std::vector<double> eigs(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) eigs[static_cast<std::size_t>(i)] = 1.0 / (i + 1);
  Matrix a = Matrix::diagonal(eigs);
  Matrix c = a;
  Matrix b = gaussian_matrix(rng, dim, dim, coupling_std);
  if (conjugate) {
    const Matrix qx = random_orthogonal(rng, dim);
    const Matrix qy = random_orthogonal(rng, dim);
    a = symmetrize(qx.transpose() * a * qx);
    c = symmetrize(qy.transpose() * c * qy);
    b = qx.transpose() * b * qy;
  }
  Provenance prov{"gen_scsc",
                  format_params({{"dim", std::to_string(dim)},
                                 {"coupling_std", linalg::format_double(coupling_std)},
                                 {"conjugate", conjugate ? "1" : "0"},
                                 {"eigen_order", "shared-descending"}}),
                  seed};
  return make_game(std::move(a), std::move(b), std::move(c), std::move(prov));
}

QuadraticGame gen_scaling_instance(int dim, double n_max, std::uint64_t seed) {
  if (dim < 2) throw ParameterError("gen_scaling_instance: dim must be >= 2");
  if (n_max < 1.0) throw ParameterError("gen_scaling_instance: n_max must be >= 1");
  SplitMix64 rng(seed);
  const auto ns = linalg::linspace(1.0, n_max, dim);
  std::vector<double> eigs(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) eigs[i] = 1.0 / ns[i];
  Matrix a = Matrix::diagonal(eigs);
  Matrix c = a;
  Matrix b = gaussian_matrix(rng, dim, dim, 1.0);
  const double smax = linalg::singular_values(b).front();
  if (smax <= 0.0) throw GenerationError("gen_scaling_instance: zero coupling draw");
  b = b * (1.0 / smax);
  Provenance prov{"gen_scaling_instance",
                  format_params({{"dim", std::to_string(dim)},
                                 {"n_max", linalg::format_double(n_max)},
                                 {"eigen_order", "shared-descending"}}),
                  seed};
  return make_game(std::move(a), std::move(b), std::move(c), std::move(prov));
}

QuadraticGame gen_bilinear(int d, int p, std::uint64_t seed,
                           std::optional<double> fixed_coupling) {
  if (d < 1 || p < 1) throw ParameterError("gen_bilinear: dims must be >= 1");
  SplitMix64 rng(seed);
  Matrix b(d, p);
  if (fixed_coupling) {
    for (int i = 0; i < std::min(d, p); ++i) b(i, i) = *fixed_coupling;
  } else {
    b = gaussian_matrix(rng, d, p, 1.0);
  }
  Provenance prov{"gen_bilinear",
                  format_params({{"d", std::to_string(d)},
                                 {"p", std::to_string(p)},
                                 {"fixed_coupling",
                                  fixed_coupling ? linalg::format_double(*fixed_coupling)
                                                 : std::string("-")}}),
                  seed};
  return make_game(Matrix::zero(d, d), std::move(b), Matrix::zero(p, p), std::move(prov));
}

QuadraticGame gen_strong_concave_only(int d, int p, std::uint64_t seed) {
  if (d < 1) throw ParameterError("gen_strong_concave_only: d must be >= 1");
  if (p < d)
    throw ParameterError(
        "gen_strong_concave_only: requires p >= d (B must be full row rank)");
  SplitMix64 rng(seed);
  std::vector<double> a_eigs(static_cast<std::size_t>(d), 0.0);
  for (int i = 1; i < d; ++i) a_eigs[static_cast<std::size_t>(i)] = rng.next_uniform();
  std::vector<double> c_eigs(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) c_eigs[static_cast<std::size_t>(i)] = 0.1 + 0.9 * rng.next_uniform();
  const Matrix a = Matrix::diagonal(a_eigs);
  const Matrix c = Matrix::diagonal(c_eigs);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix b = gaussian_matrix(rng, d, p, 1.0);
    const auto sv = linalg::singular_values(b);
    if (sv.back() > 1e-8 * std::max(1.0, sv.front())) {
      Provenance prov{"gen_strong_concave_only",
                      format_params({{"d", std::to_string(d)},
                                     {"p", std::to_string(p)},
                                     {"attempt", std::to_string(attempt)}}),
                      seed};
      return make_game(a, std::move(b), c, std::move(prov));
    }
  }
  throw GenerationError("gen_strong_concave_only: rank condition unmet after 100 attempts");
}

void write_game(std::ostream& os, const QuadraticGame& g) {
  os << "gda-game 1\n";
  os << "d " << g.d() << '\n';
  os << "p " << g.p() << '\n';
  os << "generator " << g.provenance.generator << '\n';
  os << "params " << g.provenance.params << '\n';
  os << "seed " << g.provenance.seed << '\n';
  os << "A\n";
  linalg::write_matrix(os, g.a);
  os << "B\n";
  linalg::write_matrix(os, g.b);
  os << "C\n";
  linalg::write_matrix(os, g.c);
}

QuadraticGame read_game(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "gda-game 1")
    throw ParseError("game file: missing 'gda-game 1' magic line");
  const auto expect_key = [&is](const std::string& key) {
    std::string k;
    if (!(is >> k) || k != key) throw ParseError("game file: expected '" + key + "' field");
  };
  int d = 0, p = 0;
  expect_key("d");
  if (!(is >> d)) throw ParseError("game file: bad d");
  expect_key("p");
  if (!(is >> p)) throw ParseError("game file: bad p");
  Provenance prov;
  expect_key("generator");
  if (!(is >> prov.generator)) throw ParseError("game file: bad generator");
  expect_key("params");
  is >> std::ws;
  if (!std::getline(is, prov.params)) throw ParseError("game file: bad params");
  expect_key("seed");
  if (!(is >> prov.seed)) throw ParseError("game file: bad seed");
  expect_key("A");
  Matrix a = linalg::read_matrix(is);
  expect_key("B");
  Matrix b = linalg::read_matrix(is);
  expect_key("C");
  Matrix c = linalg::read_matrix(is);
  if (a.rows() != d || b.rows() != d || b.cols() != p || c.rows() != p)
    throw ParseError("game file: block dimensions disagree with header");
  return make_game(std::move(a), std::move(b), std::move(c), std::move(prov));
}

}  // namespace gda::games
