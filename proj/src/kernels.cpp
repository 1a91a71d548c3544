#include "gaze/kernels.hpp"

#include "gaze/errors.hpp"

namespace gaze::kernels {

#if defined(GAZE_HAVE_AVX2_TU)
const Ops& avx2_ops_impl();

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops& avx2_ops() {
  if (!avx2_supported()) throw validation_error("avx2 kernels not supported on this CPU");
  return avx2_ops_impl();
}
#else
bool avx2_supported() { return false; }

const Ops& avx2_ops() {
  throw validation_error("avx2 kernels not compiled into this binary");
}
#endif

namespace {

const Ops* select_auto() {
  return avx2_supported() ? &avx2_ops() : &scalar_ops();
}

const Ops*& active_ptr() {
  static const Ops* ptr = select_auto();
  return ptr;
}

}  // namespace

const Ops& active() { return *active_ptr(); }
const char* active_name() { return active_ptr()->name; }

void force_backend(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      active_ptr() = &scalar_ops();
      return;
    case Backend::avx2:
      active_ptr() = &avx2_ops();  // throws if unsupported
      return;
  }
  throw validation_error("unknown kernel backend");
}

void reset_backend() { active_ptr() = select_auto(); }

}  // namespace gaze::kernels
