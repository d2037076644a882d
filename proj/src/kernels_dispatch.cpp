#include <atomic>
#include <cstdlib>
#include <cstring>

#include "glshap/errors.hpp"
#include "glshap/kernels.hpp"

namespace glshap::kernels {

#ifdef GLSHAP_HAVE_AVX2
const Ops& avx2_ops();
#endif

namespace {

std::atomic<const Ops*> g_active{nullptr};

bool cpu_has_avx2() {
#if defined(GLSHAP_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* resolve() {
  const char* env = std::getenv("GLSHAP_KERNEL");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
#ifdef GLSHAP_HAVE_AVX2
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return &avx2_ops();
#endif
    // unknown or unsupported request: fall through to autodetect
  }
#ifdef GLSHAP_HAVE_AVX2
  if (cpu_has_avx2()) return &avx2_ops();
#endif
  return &scalar_ops();
}

}  // namespace

const Ops& ops() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (p == nullptr) {
    p = resolve();
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

void force_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      g_active.store(&scalar_ops(), std::memory_order_release);
      return;
    case Backend::avx2:
#ifdef GLSHAP_HAVE_AVX2
      if (cpu_has_avx2()) {
        g_active.store(&avx2_ops(), std::memory_order_release);
        return;
      }
#endif
      throw invalid_input("avx2 kernels unavailable on this host");
  }
  throw invalid_input("unknown kernel backend");
}

Backend active_backend() {
  return (&ops() == &scalar_ops()) ? Backend::scalar : Backend::avx2;
}

const char* backend_name() { return ops().name; }

bool avx2_available() { return cpu_has_avx2(); }

}  // namespace glshap::kernels
