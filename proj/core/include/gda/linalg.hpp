#pragma once

#include <complex>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace gda::linalg {

using Vector = std::vector<double>;

// Dense real matrix, row-major. Values are plain data: copyable, immutable by
// convention once built, safe to share across threads.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(check_dims(rows, cols), 0.0) {}
  Matrix(int rows, int cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }
  static Matrix diagonal(const std::vector<double>& entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(const Vector& v) const;
  Matrix operator*(double s) const;
  Matrix operator-() const { return *this * -1.0; }

  friend Matrix operator*(double s, const Matrix& m) { return m * s; }

  bool operator==(const Matrix& rhs) const = default;

  double frobenius_norm() const;
  double max_abs() const;
  // max |m - m^T| entry; 0 for the empty matrix.
  double asymmetry() const;
  bool all_finite() const;

  // 2x2 block composition [[tl, tr], [bl, br]] with consistent shapes.
  static Matrix from_blocks(const Matrix& tl, const Matrix& tr, const Matrix& bl,
                            const Matrix& br);

 private:
  static std::size_t check_dims(int rows, int cols);

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Eigenvalues of a real matrix, sorted by descending modulus, ties broken by
// descending real part then descending imaginary part. Non-real values occur
// in exact conjugate pairs (the source matrices are real).
struct Spectrum {
  std::vector<std::complex<double>> values;
  int source_dim = 0;
};

// An eigenvalue counts as real iff |im| <= 1e-9 * (1 + |re|). The theorem
// checkers branch on this, so the threshold is part of the contract.
inline constexpr double kRealClassifyTol = 1e-9;

bool is_real_eigenvalue(const std::complex<double>& v);

struct EigOptions {
  // Cap on total QR sweeps; the default matches the documented 100*n policy.
  // 0 means "100 * dimension".
  int max_sweeps = 0;
};

// All eigenvalues with algebraic multiplicity, via Hessenberg reduction plus
// Francis double-shift QR (Eigen's RealSchur) and closed-form extraction of
// the quasi-triangular diagonal blocks.
//
// Throws DimensionError for non-square input, NumericalError (carrying the
// eigenvalues of the deflated blocks found so far) on non-convergence.
Spectrum eigenvalues(const Matrix& m, const EigOptions& opts = {});

// Max eigenvalue modulus == modulus of the Spectrum head element.
double spectral_radius(const Matrix& m, const EigOptions& opts = {});

// Non-negative, descending. Squares match the eigenvalues of m^T m.
std::vector<double> singular_values(const Matrix& m);

// Extremal eigenvalues of a symmetric matrix (validated within 1e-9 asymmetry).
std::pair<double, double> symmetric_eig_range(const Matrix& m);

double determinant(const Matrix& m);

// Text format: first line "rows cols", then one line per row of
// space-separated entries. Locale-independent, '.' decimal point, shortest
// round-trip formatting capped at 17 significant digits.
void write_matrix(std::ostream& os, const Matrix& m);
std::string matrix_to_string(const Matrix& m);
Matrix read_matrix(std::istream& is);
Matrix matrix_from_string(const std::string& text);

// Shortest-round-trip decimal formatting used by every text format and CSV.
std::string format_double(double v);
// Scientific notation with 17 significant digits (CSV delta columns).
std::string format_double_scientific(double v);

double norm_sq(const Vector& v);

std::vector<double> logspace(double lo, double hi, int count);
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace gda::linalg
