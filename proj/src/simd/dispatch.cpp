#include "nlos/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace nlos::simd {

#ifdef NLOS_HAVE_AVX2
const KernelTable& avx2_kernels_impl();
#endif

bool avx2_available() {
#ifdef NLOS_HAVE_AVX2
  // builtin covers cpuid + OS xsave state on gcc >= 8
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* resolve(const std::string& name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") {
#ifdef NLOS_HAVE_AVX2
    if (avx2_available()) return &avx2_kernels_impl();
#endif
    throw std::runtime_error("avx2 kernels unavailable on this machine/build");
  }
  if (name == "auto") {
#ifdef NLOS_HAVE_AVX2
    if (avx2_available()) return &avx2_kernels_impl();
#endif
    return &scalar_kernels();
  }
  throw std::runtime_error("unknown kernel table: " + name);
}

}  // namespace

const KernelTable& active_kernels() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const char* env = std::getenv("NLOS_KERNELS");
    t = resolve(env != nullptr ? env : "auto");
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void select_kernels(const std::string& name) {
  g_active.store(resolve(name), std::memory_order_release);
}

}  // namespace nlos::simd
