#include "gda/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "gda/errors.hpp"

namespace gda::linalg {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

void require_finite(const Matrix& m, const char* where) {
  if (!m.all_finite()) throw NumericalError(std::string(where) + ": non-finite entries");
}

// Eigenvalues of the 1x1 / 2x2 diagonal blocks of a real quasi-triangular
// matrix. Complex pairs come out as exact conjugates by construction.
std::vector<std::complex<double>> quasi_triangular_eigenvalues(const Eigen::MatrixXd& t) {
  const auto n = t.rows();
  std::vector<std::complex<double>> values;
  values.reserve(static_cast<std::size_t>(n));
  Eigen::Index i = 0;
  while (i < n) {
    if (i == n - 1 || t(i + 1, i) == 0.0) {
      values.emplace_back(t(i, i), 0.0);
      ++i;
    } else {
      const double a = t(i, i), b = t(i, i + 1);
      const double c = t(i + 1, i), d = t(i + 1, i + 1);
      const double mean = 0.5 * (a + d);
      const double det = a * d - b * c;
      const double disc = mean * mean - det;
      if (disc < 0.0) {
        const double im = std::sqrt(-disc);
        values.emplace_back(mean, im);
        values.emplace_back(mean, -im);
      } else {
        const double s = std::sqrt(disc);
        values.emplace_back(mean + s, 0.0);
        values.emplace_back(mean - s, 0.0);
      }
      i += 2;
    }
  }
  return values;
}

void sort_spectrum(std::vector<std::complex<double>>& values) {
  std::sort(values.begin(), values.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              const double mx = std::abs(x), my = std::abs(y);
              if (mx != my) return mx > my;
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
}

}  // namespace

std::size_t Matrix::check_dims(int rows, int cols) {
  if (rows < 0 || cols < 0 || (rows == 0) != (cols == 0))
    throw DimensionError("matrix dimensions must be positive");
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != check_dims(rows, cols))
    throw DimensionError("entry count does not match rows*cols");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw DimensionError("ragged initializer rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& entries) {
  Matrix m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix add: shape mismatch");
  Matrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += rhs.data_[k];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix sub: shape mismatch");
  Matrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= rhs.data_[k];
  return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("matrix mul: shape mismatch");
  Matrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  if (static_cast<int>(v.size()) != cols_) throw DimensionError("matvec: shape mismatch");
  Vector out(static_cast<std::size_t>(rows_), 0.0);
  const double* row = data_.data();
  for (int i = 0; i < rows_; ++i, row += cols_) {
    double acc = 0.0;
    for (int j = 0; j < cols_; ++j) acc += row[j] * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Matrix Matrix::operator*(double s) const {
  Matrix out = *this;
  for (double& v : out.data_) v *= s;
  return out;
}

double Matrix::frobenius_norm() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return std::sqrt(acc);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::asymmetry() const {
  if (!is_square()) throw DimensionError("asymmetry: square matrix required");
  double m = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix Matrix::from_blocks(const Matrix& tl, const Matrix& tr, const Matrix& bl,
                           const Matrix& br) {
  if (tl.rows() != tr.rows() || bl.rows() != br.rows() || tl.cols() != bl.cols() ||
      tr.cols() != br.cols())
    throw DimensionError("from_blocks: inconsistent block shapes");
  Matrix out(tl.rows() + bl.rows(), tl.cols() + tr.cols());
  const auto paste = [&out](const Matrix& m, int r0, int c0) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out(r0 + i, c0 + j) = m(i, j);
  };
  paste(tl, 0, 0);
  paste(tr, 0, tl.cols());
  paste(bl, tl.rows(), 0);
  paste(br, tl.rows(), tl.cols());
  return out;
}

bool is_real_eigenvalue(const std::complex<double>& v) {
  return std::abs(v.imag()) <= kRealClassifyTol * (1.0 + std::abs(v.real()));
}

Spectrum eigenvalues(const Matrix& m, const EigOptions& opts) {
  if (!m.is_square() || m.rows() < 1) throw DimensionError("eigenvalues: square matrix required");
  require_finite(m, "eigenvalues");

  const int n = m.rows();
  Spectrum spec;
  spec.source_dim = n;
  if (n == 1) {
    spec.values = {std::complex<double>(m(0, 0), 0.0)};
    return spec;
  }

  const int cap = opts.max_sweeps > 0 ? opts.max_sweeps : 100 * n;
  Eigen::RealSchur<Eigen::MatrixXd> schur(n);
  schur.setMaxIterations(cap);
  schur.compute(to_eigen(m), /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    // Deflated blocks of the partial reduction are still meaningful.
    std::vector<std::complex<double>> partial;
    try {
      partial = quasi_triangular_eigenvalues(schur.matrixT());
      sort_spectrum(partial);
    } catch (...) {
      partial.clear();
    }
    throw NumericalError("eigenvalues: QR iteration did not converge within " +
                             std::to_string(cap) + " sweeps",
                         std::move(partial));
  }
  spec.values = quasi_triangular_eigenvalues(schur.matrixT());
  sort_spectrum(spec.values);
  return spec;
}

double spectral_radius(const Matrix& m, const EigOptions& opts) {
  return std::abs(eigenvalues(m, opts).values.front());
}

std::vector<double> singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  if (m.empty()) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

std::pair<double, double> symmetric_eig_range(const Matrix& m) {
  if (!m.is_square() || m.rows() < 1)
    throw DimensionError("symmetric_eig_range: square matrix required");
  require_finite(m, "symmetric_eig_range");
  if (m.asymmetry() > 1e-9 * (1.0 + m.max_abs()))
    throw ParameterError("symmetric_eig_range: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("symmetric_eig_range: eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double determinant(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("determinant: square matrix required");
  require_finite(m, "determinant");
  return to_eigen(m).partialPivLu().determinant();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_double_scientific(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

std::string matrix_to_string(const Matrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

namespace {

double parse_double_token(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ParseError("invalid numeric token '" + tok + "'");
  return v;
}

}  // namespace

Matrix read_matrix(std::istream& is) {
  int rows = 0, cols = 0;
  if (!(is >> rows >> cols)) throw ParseError("matrix header: expected 'rows cols'");
  if (rows < 1 || cols < 1) throw ParseError("matrix header: non-positive dimensions");
  // Dense text matrices beyond a few thousand rows are outside this tool's
  // scope; the cap keeps a corrupt header from requesting absurd allocations.
  if (rows > 10000 || cols > 10000)
    throw ParseError("matrix header: dimensions exceed the 10000 cap");
  Matrix m(rows, cols);
  std::string tok;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (!(is >> tok)) throw ParseError("matrix body: unexpected end of input");
      m(i, j) = parse_double_token(tok);
    }
  return m;
}

Matrix matrix_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

double norm_sq(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

std::vector<double> logspace(double lo, double hi, int count) {
  if (count < 1 || lo <= 0.0 || hi <= 0.0) throw ParameterError("logspace: bad arguments");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw ParameterError("linspace: bad count");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

}  // namespace gda::linalg
