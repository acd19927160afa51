#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace spectralmono {

using Vec = std::vector<double>;

// Dense real matrix, row-major storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix diag(const Vec& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const Vec& data() const noexcept { return data_; }
  Vec& data() noexcept { return data_; }

  Matrix transposed() const;
  Vec apply(const Vec& x) const;            // A x
  Vec apply_transpose(const Vec& x) const;  // A^T x
  Vec column(std::size_t j) const;
  void set_column(std::size_t j, const Vec& c);

  double norm_inf() const;  // max absolute row sum
  double max_abs() const;
  double frobenius() const;
  double trace() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

// Positive or general diagonal matrix stored as its diagonal.
class DiagonalMatrix {
 public:
  DiagonalMatrix() = default;
  explicit DiagonalMatrix(Vec diag);

  static DiagonalMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return diag_.size(); }
  double operator()(std::size_t i) const { return diag_[i]; }
  double& operator()(std::size_t i) { return diag_[i]; }
  const Vec& diag() const noexcept { return diag_; }

  bool positive() const;
  // True when the entries are not all equal within the given band
  // (relative to 1 + max |d_i|).
  bool nonscalar(double tol_scalar) const;

  DiagonalMatrix inverse() const;
  DiagonalMatrix sqrt() const;
  Matrix to_matrix() const;

 private:
  Vec diag_;
};

Matrix left_scale(const DiagonalMatrix& d, const Matrix& a);    // D A
Matrix right_scale(const Matrix& a, const DiagonalMatrix& d);   // A D
// D A D^{-1}
Matrix diagonal_conjugate(const DiagonalMatrix& d, const Matrix& a);

// Vector helpers.
double dot(const Vec& a, const Vec& b);
double sum(const Vec& v);
double norm2(const Vec& v);
double norm_inf(const Vec& v);
double max_abs_diff(const Vec& a, const Vec& b);

// Validation helpers; throw SpectralError on failure.
void require_square(const Matrix& a, const char* op);
void require_same_shape(const Matrix& a, const Matrix& b, const char* op);
void require_finite(const Matrix& a, const char* op);
void require_nonnegative(const Matrix& a, const char* op);
bool is_nonnegative(const Matrix& a);

}  // namespace spectralmono
