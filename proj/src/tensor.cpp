#include "gaze/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "gaze/errors.hpp"
#include "gaze/kernels.hpp"

namespace gaze {

Vector affine(const Matrix& w, const Vector& b, const Vector& x) {
  if (w.cols() != x.size() || w.rows() != b.size()) {
    throw validation_error("affine shape mismatch: W is " + std::to_string(w.rows()) + "x" +
                           std::to_string(w.cols()) + ", b has length " +
                           std::to_string(b.size()) + ", x has length " +
                           std::to_string(x.size()));
  }
  const auto& k = kernels::active();
  Vector y(w.rows());
  for (std::size_t r = 0; r < w.rows(); ++r) {
    y[r] = k.dot(w.row(r), x.data(), w.cols()) + b[r];
  }
  return y;
}

Vector softmax(const Vector& v) {
  if (v.empty()) throw validation_error("softmax of empty vector");
  const auto& k = kernels::active();
  double max_val = *std::max_element(v.begin(), v.end());
  Vector y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = std::exp(v[i] - max_val);
  double total = k.vsum(y.data(), y.size());
  k.scale(1.0 / total, y.data(), y.size());
  return y;
}

Vector elementwise(Nonlinearity kind, const Vector& v) {
  Vector y(v.size());
  if (kind == Nonlinearity::sigmoid) {
    for (std::size_t i = 0; i < v.size(); ++i) y[i] = sigmoid(v[i]);
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) y[i] = std::tanh(v[i]);
  }
  return y;
}

Vector dropout_mask(double rate, std::size_t length, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw validation_error("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  Vector mask(length, 1.0);
  if (rate == 0.0) return mask;
  double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < length; ++i) {
    mask[i] = rng.uniform() < rate ? 0.0 : keep_scale;
  }
  return mask;
}

Vector affine_backward_input(const Matrix& w, const Vector& d_out) {
  if (w.rows() != d_out.size()) {
    throw validation_error("affine backward shape mismatch: W is " + std::to_string(w.rows()) +
                           "x" + std::to_string(w.cols()) + ", d_out has length " +
                           std::to_string(d_out.size()));
  }
  const auto& k = kernels::active();
  Vector dx(w.cols(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    k.axpy(d_out[r], w.row(r), dx.data(), w.cols());
  }
  return dx;
}

void affine_backward_params(const Vector& x, const Vector& d_out, Matrix& dw_acc,
                            Vector& db_acc) {
  if (dw_acc.rows() != d_out.size() || dw_acc.cols() != x.size() ||
      db_acc.size() != d_out.size()) {
    throw validation_error("affine backward accumulator shape mismatch");
  }
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < d_out.size(); ++r) {
    k.axpy(d_out[r], x.data(), dw_acc.row(r), x.size());
    db_acc[r] += d_out[r];
  }
}

Vector softmax_backward(const Vector& y, const Vector& d_out) {
  if (y.size() != d_out.size()) throw validation_error("softmax backward length mismatch");
  const auto& k = kernels::active();
  double inner = k.dot(d_out.data(), y.data(), y.size());
  Vector dz(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dz[i] = y[i] * (d_out[i] - inner);
  return dz;
}

Vector elementwise_backward(Nonlinearity kind, const Vector& y, const Vector& d_out) {
  if (y.size() != d_out.size()) throw validation_error("elementwise backward length mismatch");
  Vector dx(y.size());
  if (kind == Nonlinearity::sigmoid) {
    for (std::size_t i = 0; i < y.size(); ++i) dx[i] = d_out[i] * y[i] * (1.0 - y[i]);
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) dx[i] = d_out[i] * (1.0 - y[i] * y[i]);
  }
  return dx;
}

void check_finite(const double* values, std::size_t n, const std::string& what) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) {
      throw validation_error(what + ": non-finite value at index " + std::to_string(i));
    }
  }
}

void check_finite(const Vector& v, const std::string& what) {
  check_finite(v.data(), v.size(), what);
}

}  // namespace gaze
