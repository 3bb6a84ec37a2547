#include "nlos/simd/kernels.hpp"

#ifdef NLOS_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace nlos::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [w0, w1] -> [w0, w0, w1, w1], matching two interleaved complex slots
inline __m256d dup_pair(const double* w) {
  __m128d p = _mm_loadu_pd(w);
  return _mm256_set_m128d(_mm_unpackhi_pd(p, p), _mm_unpacklo_pd(p, p));
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void caxpy_real(std::size_t n, double a, const cplx* v, cplx* acc) {
  axpy(2 * n, a, reinterpret_cast<const double*>(v), reinterpret_cast<double*>(acc));
}

void caxpy(std::size_t n, cplx s, const cplx* v, cplx* acc) {
  const double* p = reinterpret_cast<const double*>(v);
  double* q = reinterpret_cast<double*>(acc);
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vv = _mm256_loadu_pd(p + 2 * i);
    __m256d sw = _mm256_permute_pd(vv, 0x5);  // (re,im) -> (im,re)
    // even lanes: vr*sr - vi*si, odd lanes: vi*sr + vr*si
    __m256d res = _mm256_fmaddsub_pd(vv, sr, _mm256_mul_pd(sw, si));
    _mm256_storeu_pd(q + 2 * i, _mm256_add_pd(_mm256_loadu_pd(q + 2 * i), res));
  }
  for (; i < n; ++i) {
    const double vr = p[2 * i], vi = p[2 * i + 1];
    q[2 * i] += s.real() * vr - s.imag() * vi;
    q[2 * i + 1] += s.real() * vi + s.imag() * vr;
  }
}

void craxpy(std::size_t n, cplx s, const double* v, cplx* acc) {
  double* q = reinterpret_cast<double*>(acc);
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d qv = _mm256_loadu_pd(q + 2 * i);
    qv = _mm256_fmadd_pd(dup_pair(v + i), sv, qv);
    _mm256_storeu_pd(q + 2 * i, qv);
  }
  for (; i < n; ++i) {
    q[2 * i] += s.real() * v[i];
    q[2 * i + 1] += s.imag() * v[i];
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cplx cdotc(std::size_t n, const cplx* a, const cplx* b) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d re_acc = _mm256_setzero_pd();
  __m256d im_acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d av = _mm256_loadu_pd(pa + 2 * i);
    __m256d bv = _mm256_loadu_pd(pb + 2 * i);
    re_acc = _mm256_fmadd_pd(av, bv, re_acc);                         // ar*br, ai*bi
    im_acc = _mm256_fmadd_pd(_mm256_permute_pd(av, 0x5), bv, im_acc); // ai*br, ar*bi
  }
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double re = hsum(re_acc);
  double im = hsum(_mm256_mul_pd(im_acc, sign));
  for (; i < n; ++i) {
    const double ar = pa[2 * i], ai = pa[2 * i + 1];
    const double br = pb[2 * i], bi = pb[2 * i + 1];
    re += ar * br + ai * bi;
    im += ai * br - ar * bi;
  }
  return {re, im};
}

double nrm2sq(std::size_t n, const double* a) { return dot(n, a, a); }

double wnrm2sq(std::size_t n, const double* w, const cplx* a) {
  const double* p = reinterpret_cast<const double*>(a);
  if (w == nullptr) return dot(2 * n, p, p);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d av = _mm256_loadu_pd(p + 2 * i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(av, av), dup_pair(w + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += w[i] * (p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1]);
  return s;
}

double wdotc_re(std::size_t n, const double* w, const cplx* a, const cplx* b) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  if (w == nullptr) return dot(2 * n, pa, pb);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    acc = _mm256_fmadd_pd(prod, dup_pair(w + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += w[i] * (pa[2 * i] * pb[2 * i] + pa[2 * i + 1] * pb[2 * i + 1]);
  return s;
}

void soft_threshold(std::size_t n, double a, const double* x, double* out) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d t = _mm256_sub_pd(one, _mm256_div_pd(av, _mm256_and_pd(xv, absmask)));
    t = _mm256_max_pd(t, zero);  // NaN from 0/0 compares false, yielding 0
    _mm256_storeu_pd(out + i, _mm256_mul_pd(t, xv));
  }
  for (; i < n; ++i) {
    const double t = 1.0 - a / std::abs(x[i]);
    out[i] = t > 0.0 ? t * x[i] : 0.0;
  }
}

}  // namespace

const KernelTable& avx2_kernels_impl() {
  static const KernelTable table = {
      "avx2", axpy,   caxpy_real, caxpy,    craxpy,         dot,
      cdotc,  nrm2sq, wnrm2sq,    wdotc_re, soft_threshold,
  };
  return table;
}

}  // namespace nlos::simd

#endif  // NLOS_HAVE_AVX2
