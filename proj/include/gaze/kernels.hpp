#pragma once

#include <cstddef>

namespace gaze::kernels {

// Dense inner-loop primitives behind every matrix/vector operation in the
// project. Each has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant; the backend is picked once at runtime.
// SIMD variants may reassociate sums, so results can differ from the scalar
// path in the last bits; within one process the selected backend is fixed,
// which keeps runs bit-reproducible.
struct Ops {
  const char* name;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  // out[i] = x[i] * y[i]
  void (*vmul)(const double* x, const double* y, double* out, std::size_t n);
  // out[i] += x[i] * y[i]
  void (*vmuladd)(const double* x, const double* y, double* out, std::size_t n);
  // sum_i x[i]
  double (*vsum)(const double* x, std::size_t n);
};

enum class Backend { scalar, avx2 };

const Ops& scalar_ops();
bool avx2_supported();
// Valid only when avx2_supported(); throws validation_error otherwise.
const Ops& avx2_ops();

// Backend in use: AVX2 when the CPU supports it, otherwise scalar.
const Ops& active();
const char* active_name();

// Test hook: pin the backend (throws validation_error if unsupported).
void force_backend(Backend backend);
// Back to automatic selection.
void reset_backend();

}  // namespace gaze::kernels
