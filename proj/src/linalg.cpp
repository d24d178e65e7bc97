#include "lsqbounds/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsqbounds/errors.hpp"

namespace lsqb {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                            std::to_string(rows * cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

namespace {

template <typename Op>
Matrix elementwise(const Matrix& a, const Matrix& b, Op op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("elementwise op: shapes differ");
  Matrix out(a.rows(), a.cols());
  auto ad = a.data();
  auto bd = b.data();
  auto od = out.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] = op(ad[i], bd[i]);
  return out;
}

}  // namespace

Matrix operator-(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, [](double x, double y) { return x - y; });
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, [](double x, double y) { return x + y; });
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector product: size mismatch");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double trace(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("trace of a non-square matrix");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

Matrix cholesky(const Matrix& s) {
  if (!s.square()) throw DimensionMismatch("cholesky: matrix is not square");
  const std::size_t n = s.rows();
  const double scale = s.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale) throw NotSymmetric("cholesky: matrix is not symmetric");

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = s(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) throw NotPositiveDefinite("cholesky: non-positive pivot at column " + std::to_string(j));
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / d;
    }
  }
  return l;
}

HouseholderQR::HouseholderQR(Matrix a) : qr_(std::move(a)) {
  const std::size_t n = qr_.rows();
  const std::size_t m = qr_.cols();
  if (n < m) throw DimensionMismatch("least squares needs rows >= cols");
  if (m == 0) throw DimensionMismatch("least squares needs at least one column");
  tau_.assign(m, 0.0);
  r_diag_.assign(m, 0.0);

  for (std::size_t j = 0; j < m; ++j) {
    double tail = 0.0;
    for (std::size_t i = j + 1; i < n; ++i) tail += qr_(i, j) * qr_(i, j);
    const double x0 = qr_(j, j);
    if (tail == 0.0) {
      r_diag_[j] = x0;
      continue;
    }
    const double beta = -std::copysign(std::sqrt(x0 * x0 + tail), x0);
    tau_[j] = (beta - x0) / beta;
    const double inv = 1.0 / (x0 - beta);
    for (std::size_t i = j + 1; i < n; ++i) qr_(i, j) *= inv;
    qr_(j, j) = beta;
    r_diag_[j] = beta;

    for (std::size_t c = j + 1; c < m; ++c) {
      double w = qr_(j, c);
      for (std::size_t i = j + 1; i < n; ++i) w += qr_(i, j) * qr_(i, c);
      w *= tau_[j];
      qr_(j, c) -= w;
      for (std::size_t i = j + 1; i < n; ++i) qr_(i, c) -= w * qr_(i, j);
    }
  }

  double largest = 0.0;
  double smallest = std::abs(r_diag_[0]);
  for (double d : r_diag_) {
    largest = std::max(largest, std::abs(d));
    smallest = std::min(smallest, std::abs(d));
  }
  if (!(smallest > kRankTolerance * largest)) throw RankDeficient("design matrix is numerically rank deficient");
}

void HouseholderQR::apply_qt(std::span<double> b) const {
  const std::size_t n = qr_.rows();
  for (std::size_t j = 0; j < qr_.cols(); ++j) {
    if (tau_[j] == 0.0) continue;
    double w = b[j];
    for (std::size_t i = j + 1; i < n; ++i) w += qr_(i, j) * b[i];
    w *= tau_[j];
    b[j] -= w;
    for (std::size_t i = j + 1; i < n; ++i) b[i] -= w * qr_(i, j);
  }
}

Vector HouseholderQR::solve(std::span<const double> b) const {
  if (b.size() != rows()) throw DimensionMismatch("least squares: right-hand side has wrong length");
  Vector work(b.begin(), b.end());
  apply_qt(work);
  const std::size_t m = cols();
  Vector x(m);
  for (std::size_t k = m; k-- > 0;) {
    double v = work[k];
    for (std::size_t c = k + 1; c < m; ++c) v -= qr_(k, c) * x[c];
    x[k] = v / qr_(k, k);
  }
  return x;
}

Matrix HouseholderQR::thin_q() const {
  const std::size_t n = rows();
  const std::size_t m = cols();
  Matrix q(n, m);
  Vector col(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::fill(col.begin(), col.end(), 0.0);
    col[k] = 1.0;
    // Q e_k = H_0 H_1 ... H_{m-1} e_k
    for (std::size_t j = m; j-- > 0;) {
      if (tau_[j] == 0.0) continue;
      double w = col[j];
      for (std::size_t i = j + 1; i < n; ++i) w += qr_(i, j) * col[i];
      w *= tau_[j];
      col[j] -= w;
      for (std::size_t i = j + 1; i < n; ++i) col[i] -= w * qr_(i, j);
    }
    for (std::size_t i = 0; i < n; ++i) q(i, k) = col[i];
  }
  return q;
}

Vector solve_least_squares(const Matrix& phi, std::span<const double> y) {
  return HouseholderQR(phi).solve(y);
}

Matrix projection(const Matrix& a) {
  const Matrix q = HouseholderQR(a).thin_q();
  Matrix p = q * q.transpose();
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = v;
      p(j, i) = v;
    }
  return p;
}

Matrix spd_inverse(const Matrix& s) {
  const Matrix l = cholesky(s);
  const std::size_t n = s.rows();
  Matrix inv(n, n);
  Vector y(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = i == c ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * y[k];
      y[i] = v / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double v = y[i];
      for (std::size_t k = i + 1; k < n; ++k) v -= l(k, i) * inv(k, c);
      inv(i, c) = v / l(i, i);
    }
  }
  return inv;
}

}  // namespace lsqb
