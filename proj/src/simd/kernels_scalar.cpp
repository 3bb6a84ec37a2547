#include "nlos/simd/kernels.hpp"

#include <cmath>

namespace nlos::simd {
namespace {

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void caxpy_real(std::size_t n, double a, const cplx* v, cplx* acc) {
  // interleaved (re,im) pairs scale like a real array of length 2n
  axpy(2 * n, a, reinterpret_cast<const double*>(v), reinterpret_cast<double*>(acc));
}

void caxpy(std::size_t n, cplx s, const cplx* v, cplx* acc) {
  const double sr = s.real(), si = s.imag();
  const double* p = reinterpret_cast<const double*>(v);
  double* q = reinterpret_cast<double*>(acc);
  for (std::size_t i = 0; i < n; ++i) {
    const double vr = p[2 * i], vi = p[2 * i + 1];
    q[2 * i] += sr * vr - si * vi;
    q[2 * i + 1] += sr * vi + si * vr;
  }
}

void craxpy(std::size_t n, cplx s, const double* v, cplx* acc) {
  const double sr = s.real(), si = s.imag();
  double* q = reinterpret_cast<double*>(acc);
  for (std::size_t i = 0; i < n; ++i) {
    q[2 * i] += sr * v[i];
    q[2 * i + 1] += si * v[i];
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx cdotc(std::size_t n, const cplx* a, const cplx* b) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = pa[2 * i], ai = pa[2 * i + 1];
    const double br = pb[2 * i], bi = pb[2 * i + 1];
    re += ar * br + ai * bi;
    im += ai * br - ar * bi;
  }
  return {re, im};
}

double nrm2sq(std::size_t n, const double* a) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double wnrm2sq(std::size_t n, const double* w, const cplx* a) {
  const double* p = reinterpret_cast<const double*>(a);
  double s = 0.0;
  if (w == nullptr) {
    for (std::size_t i = 0; i < 2 * n; ++i) s += p[i] * p[i];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      s += w[i] * (p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1]);
  }
  return s;
}

double wdotc_re(std::size_t n, const double* w, const cplx* a, const cplx* b) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = pa[2 * i] * pb[2 * i] + pa[2 * i + 1] * pb[2 * i + 1];
    s += (w == nullptr) ? t : w[i] * t;
  }
  return s;
}

void soft_threshold(std::size_t n, double a, const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 1.0 - a / std::abs(x[i]);
    out[i] = t > 0.0 ? t * x[i] : 0.0;  // NaN (0/0) lands in the zero branch
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table = {
      "scalar", axpy,  caxpy_real, caxpy,    craxpy,         dot,
      cdotc,    nrm2sq, wnrm2sq,   wdotc_re, soft_threshold,
  };
  return table;
}

}  // namespace nlos::simd
