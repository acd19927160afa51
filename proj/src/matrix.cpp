#include "spectralmono/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectralmono/errors.hpp"

namespace spectralmono {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::PatternAsymmetric: return "PatternAsymmetric";
    case ErrorCode::CycleInconsistent: return "CycleInconsistent";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NotJointlySymmetrizable: return "NotJointlySymmetrizable";
    case ErrorCode::JointDiagonalizationFailed: return "JointDiagonalizationFailed";
    case ErrorCode::NotSymmetrizable: return "NotSymmetrizable";
    case ErrorCode::SOSMismatch: return "SOSMismatch";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::AbsorbingState: return "AbsorbingState";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw SpectralError(code, std::string(error_code_name(code)) + ": " + message);
}

void fail_with_witness(ErrorCode code, const std::string& message,
                       std::vector<std::size_t> witness) {
  SpectralError err(code, std::string(error_code_name(code)) + ": " + message);
  err.witness = std::move(witness);
  throw err;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorCode::ShapeMismatch, "ragged initializer rows");
    std::size_t j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

Matrix Matrix::diag(const Vec& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_) fail(ErrorCode::ShapeMismatch, "matrix-vector size mismatch");
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

Vec Matrix::apply_transpose(const Vec& x) const {
  if (x.size() != rows_) fail(ErrorCode::ShapeMismatch, "matrix-vector size mismatch");
  Vec y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) y[j] += row[j] * xi;
  }
  return y;
}

Vec Matrix::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_column(std::size_t j, const Vec& c) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double x : data_) best = std::max(best, std::abs(x));
  return best;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

DiagonalMatrix::DiagonalMatrix(Vec diag) : diag_(std::move(diag)) {}

DiagonalMatrix DiagonalMatrix::identity(std::size_t n) {
  return DiagonalMatrix(Vec(n, 1.0));
}

bool DiagonalMatrix::positive() const {
  for (double d : diag_)
    if (!(d > 0.0) || !std::isfinite(d)) return false;
  return true;
}

bool DiagonalMatrix::nonscalar(double tol_scalar) const {
  if (diag_.size() < 2) return false;
  const auto [lo, hi] = std::minmax_element(diag_.begin(), diag_.end());
  const double scale = 1.0 + std::max(std::abs(*lo), std::abs(*hi));
  return (*hi - *lo) > tol_scalar * scale;
}

DiagonalMatrix DiagonalMatrix::inverse() const {
  Vec inv(diag_.size());
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    if (diag_[i] == 0.0) fail(ErrorCode::InvalidInput, "diagonal inverse of zero entry");
    inv[i] = 1.0 / diag_[i];
  }
  return DiagonalMatrix(inv);
}

DiagonalMatrix DiagonalMatrix::sqrt() const {
  Vec s(diag_.size());
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    if (diag_[i] < 0.0) fail(ErrorCode::InvalidInput, "diagonal sqrt of negative entry");
    s[i] = std::sqrt(diag_[i]);
  }
  return DiagonalMatrix(s);
}

Matrix DiagonalMatrix::to_matrix() const { return Matrix::diag(diag_); }

Matrix left_scale(const DiagonalMatrix& d, const Matrix& a) {
  if (d.size() != a.rows()) fail(ErrorCode::ShapeMismatch, "left_scale size mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= d(i);
  return out;
}

Matrix right_scale(const Matrix& a, const DiagonalMatrix& d) {
  if (d.size() != a.cols()) fail(ErrorCode::ShapeMismatch, "right_scale size mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= d(j);
  return out;
}

Matrix diagonal_conjugate(const DiagonalMatrix& d, const Matrix& a) {
  require_square(a, "diagonal_conjugate");
  if (d.size() != a.rows()) fail(ErrorCode::ShapeMismatch, "diagonal_conjugate size mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= d(i) / d(j);
  return out;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vec& v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

double max_abs_diff(const Vec& a, const Vec& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

void require_square(const Matrix& a, const char* op) {
  if (!a.square() || a.rows() == 0)
    fail(ErrorCode::ShapeMismatch, std::string(op) + " requires a nonempty square matrix");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::ShapeMismatch, std::string(op) + " requires equal shapes");
}

void require_finite(const Matrix& a, const char* op) {
  for (double x : a.data())
    if (!std::isfinite(x))
      fail(ErrorCode::InvalidInput, std::string(op) + " requires finite entries");
}

void require_nonnegative(const Matrix& a, const char* op) {
  for (double x : a.data())
    if (x < 0.0)
      fail(ErrorCode::InvalidInput, std::string(op) + " requires nonnegative entries");
}

bool is_nonnegative(const Matrix& a) {
  for (double x : a.data())
    if (x < 0.0) return false;
  return true;
}

}  // namespace spectralmono
