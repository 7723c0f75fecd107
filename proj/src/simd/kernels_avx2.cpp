#include <immintrin.h>

#include "shnw/simd/kernels.hpp"

namespace shnw::simd {
namespace {

// (m0, m1) -> (m0, m0, m1, m1), matching two interleaved complex values.
inline __m256d dup_pair(const double* m) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(m)), 0x50);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void rotate(std::size_t n, const double* c, const double* s, const double* w, cplx* u, cplx* ut) {
  auto* pu = reinterpret_cast<double*>(u);
  auto* pt = reinterpret_cast<double*>(ut);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d cc = dup_pair(c + k);
    const __m256d ss = dup_pair(s + k);
    const __m256d ww = dup_pair(w + k);
    const __m256d a = _mm256_loadu_pd(pu + 2 * k);
    const __m256d b = _mm256_loadu_pd(pt + 2 * k);
    _mm256_storeu_pd(pu + 2 * k, _mm256_fmadd_pd(ss, b, _mm256_mul_pd(cc, a)));
    _mm256_storeu_pd(pt + 2 * k, _mm256_fmadd_pd(ww, a, _mm256_mul_pd(cc, b)));
  }
  for (; k < n; ++k) {
    const cplx a = u[k];
    const cplx b = ut[k];
    u[k] = c[k] * a + s[k] * b;
    ut[k] = w[k] * a + c[k] * b;
  }
}

void scale(std::size_t n, const double* m, const cplx* in, cplx* out) {
  const auto* pi = reinterpret_cast<const double*>(in);
  auto* po = reinterpret_cast<double*>(out);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    _mm256_storeu_pd(po + 2 * k, _mm256_mul_pd(dup_pair(m + k), _mm256_loadu_pd(pi + 2 * k)));
  for (; k < n; ++k) out[k] = m[k] * in[k];
}

void scale_add(std::size_t n, double alpha, const double* m, const cplx* x, cplx* y) {
  const auto* px = reinterpret_cast<const double*>(x);
  auto* py = reinterpret_cast<double*>(y);
  const __m256d aa = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d coef = _mm256_mul_pd(aa, dup_pair(m + k));
    _mm256_storeu_pd(py + 2 * k,
                     _mm256_fmadd_pd(coef, _mm256_loadu_pd(px + 2 * k), _mm256_loadu_pd(py + 2 * k)));
  }
  for (; k < n; ++k) y[k] += (alpha * m[k]) * x[k];
}

void axpy(std::size_t n, double alpha, const cplx* x, cplx* y) {
  const auto* px = reinterpret_cast<const double*>(x);
  auto* py = reinterpret_cast<double*>(y);
  const __m256d aa = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    _mm256_storeu_pd(py + 2 * k,
                     _mm256_fmadd_pd(aa, _mm256_loadu_pd(px + 2 * k), _mm256_loadu_pd(py + 2 * k)));
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void scal(std::size_t n, double alpha, cplx* x) {
  auto* px = reinterpret_cast<double*>(x);
  const __m256d aa = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    _mm256_storeu_pd(px + 2 * k, _mm256_mul_pd(aa, _mm256_loadu_pd(px + 2 * k)));
  for (; k < n; ++k) x[k] *= alpha;
}

double sum_sq(std::size_t n, const cplx* x) {
  const auto* px = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * k);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = hsum(acc);
  for (; k < n; ++k) total += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  return total;
}

double weighted_sum_sq(std::size_t n, const double* w, const cplx* x) {
  const auto* px = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * k);
    acc = _mm256_fmadd_pd(dup_pair(w + k), _mm256_mul_pd(v, v), acc);
  }
  double total = hsum(acc);
  for (; k < n; ++k) total += w[k] * (x[k].real() * x[k].real() + x[k].imag() * x[k].imag());
  return total;
}

void mul_real(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  auto* po = reinterpret_cast<double*>(out);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k));
    _mm256_storeu_pd(po + 2 * k, _mm256_blend_pd(p, zero, 0b1010));
  }
  for (; k < n; ++k) out[k] = cplx(a[k].real() * b[k].real(), 0.0);
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", rotate, scale,           scale_add, axpy,
                                 scal,   sum_sq, weighted_sum_sq, mul_real};
  return table;
}

}  // namespace shnw::simd
