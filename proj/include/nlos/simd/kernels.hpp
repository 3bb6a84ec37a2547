#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace nlos::simd {

using cplx = std::complex<double>;

// Hot-loop primitives behind a runtime-dispatched function table.  Every
// entry has a scalar reference implementation; on x86-64 an AVX2+FMA variant
// is selected at startup when the CPU supports it.  Weight pointers may be
// null, meaning unit weights.  Each implementation uses a fixed summation
// order, so results are reproducible for a given table.
struct KernelTable {
  const char* name;
  // y[i] += a * x[i]
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  // acc[i] += a * v[i]
  void (*caxpy_real)(std::size_t n, double a, const cplx* v, cplx* acc);
  // acc[i] += s * v[i]
  void (*caxpy)(std::size_t n, cplx s, const cplx* v, cplx* acc);
  // acc[i] += s * v[i] with real v
  void (*craxpy)(std::size_t n, cplx s, const double* v, cplx* acc);
  // sum_i a[i] * b[i]
  double (*dot)(std::size_t n, const double* a, const double* b);
  // sum_i a[i] * conj(b[i])
  cplx (*cdotc)(std::size_t n, const cplx* a, const cplx* b);
  // sum_i a[i]^2
  double (*nrm2sq)(std::size_t n, const double* a);
  // sum_i w[i] * |a[i]|^2
  double (*wnrm2sq)(std::size_t n, const double* w, const cplx* a);
  // sum_i w[i] * Re(a[i] * conj(b[i]))
  double (*wdotc_re)(std::size_t n, const double* w, const cplx* a, const cplx* b);
  // out[i] = max(1 - a/|x[i]|, 0) * x[i]
  void (*soft_threshold)(std::size_t n, double a, const double* x, double* out);
};

const KernelTable& scalar_kernels();

// True when this build carries the AVX2 variant and the CPU can run it.
bool avx2_available();

// Active table: resolved once from NLOS_KERNELS (scalar|avx2|auto) or cpuid.
const KernelTable& active_kernels();

// Force a table by name ("scalar", "avx2", "auto"); throws on unsupported.
void select_kernels(const std::string& name);

}  // namespace nlos::simd
