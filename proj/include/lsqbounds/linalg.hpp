#pragma once

// Small dense linear algebra: row-major matrices, Cholesky, Householder QR
// least squares, projections and SPD inverses. Sizes are desk scale, so
// nothing here is blocked or vectorized.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lsqb {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Matrix transpose() const;
  double max_abs() const;
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double trace(const Matrix& a);

/// Relative rank tolerance applied to the diagonal of R.
inline constexpr double kRankTolerance = 1e-10;

/// Lower-triangular L with S = L L^T. Throws NotSymmetric or NotPositiveDefinite.
Matrix cholesky(const Matrix& s);

/// Householder QR of a tall full-column-rank matrix. Factor once, solve many.
class HouseholderQR {
 public:
  /// Throws DimensionMismatch when rows < cols, RankDeficient when
  /// min |R_jj| <= kRankTolerance * max |R_jj|.
  explicit HouseholderQR(Matrix a);

  std::size_t rows() const { return qr_.rows(); }
  std::size_t cols() const { return qr_.cols(); }

  /// Minimizer of ||b - A x||^2.
  Vector solve(std::span<const double> b) const;

  /// The n x m orthonormal factor Q1 with A = Q1 R.
  Matrix thin_q() const;

 private:
  void apply_qt(std::span<double> b) const;

  Matrix qr_;  // R above the diagonal, Householder vectors below (unit leading entry implicit)
  Vector tau_;
  Vector r_diag_;
};

Vector solve_least_squares(const Matrix& phi, std::span<const double> y);

/// P = A (A^T A)^{-1} A^T, formed as Q1 Q1^T.
Matrix projection(const Matrix& a);

Matrix spd_inverse(const Matrix& s);

}  // namespace lsqb
