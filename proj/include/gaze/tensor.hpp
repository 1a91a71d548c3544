#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gaze/rng.hpp"

namespace gaze {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. All training math runs in 64-bit;
// finite-difference gradient checks at 1e-4 are not reliable in float.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Nonlinearity { sigmoid, tanh };

inline double sigmoid(double x) {
  // Split on sign so exp never overflows.
  if (x >= 0.0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

// W x + b. Throws validation_error naming both shapes on mismatch.
Vector affine(const Matrix& w, const Vector& b, const Vector& x);

// Max-subtracted softmax; output sums to 1, entries in (0, 1).
Vector softmax(const Vector& v);

Vector elementwise(Nonlinearity kind, const Vector& v);

// Inverted dropout: each entry 0 with probability rate, else 1/(1-rate), so
// E[mask * v] = v and inference needs no rescaling.
Vector dropout_mask(double rate, std::size_t length, Rng& rng);

// Analytic backward rules for the primitives above. Each consumes the
// upstream cotangent d_out and, where cheaper, the op's own output.
Vector affine_backward_input(const Matrix& w, const Vector& d_out);        // W^T d_out
void affine_backward_params(const Vector& x, const Vector& d_out,
                            Matrix& dw_acc, Vector& db_acc);               // accumulates
Vector softmax_backward(const Vector& y, const Vector& d_out);
Vector elementwise_backward(Nonlinearity kind, const Vector& y, const Vector& d_out);

// Throws validation_error if any entry is non-finite.
void check_finite(const double* values, std::size_t n, const std::string& what);
void check_finite(const Vector& v, const std::string& what);

}  // namespace gaze
