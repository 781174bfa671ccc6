#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace agmmh {

using Vector = std::vector<double>;

/// Dense row-major matrix. Dimensions here are small (a few tens at most),
/// so everything is plain O(d^2)/O(d^3) arithmetic with value semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);

double max_abs(const Matrix& m);
double frobenius_norm(const Matrix& m);

/// a += (u v' + v u') / 2. Keeps accumulated scatter matrices exactly
/// symmetric even when u and v differ by rounding.
void add_outer_symmetric(Matrix& a, const Vector& u, const Vector& v);

/// Lower-triangular Cholesky factor L with L L' = m, reading only the lower
/// triangle of m. Returns nullopt when the input is not positive definite;
/// callers use that as the signal for their regularization path.
std::optional<Matrix> cholesky(const Matrix& m);

/// Solve L y = b for lower-triangular L.
Vector solve_lower(const Matrix& l, const Vector& b);

/// L z for lower-triangular L.
Vector lower_times(const Matrix& l, const Vector& z);

}  // namespace agmmh
