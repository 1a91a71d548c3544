#include "gaze/kernels.hpp"

// Reference kernels. Plain loops, no reassociation tricks: these define the
// semantics the SIMD variants are equivalence-tested against.

namespace gaze::kernels {
namespace {

double scalar_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void scalar_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scalar_scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void scalar_vmul(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scalar_vmuladd(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += x[i] * y[i];
}

double scalar_vsum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar",     scalar_dot,     scalar_axpy, scalar_scale,
                       scalar_vmul,  scalar_vmuladd, scalar_vsum};
  return ops;
}

}  // namespace gaze::kernels
