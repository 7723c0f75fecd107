#pragma once

// Per-mode inner loops. Every kernel has a scalar reference implementation;
// an AVX2+FMA variant is selected at runtime when the CPU supports it.
// Complex arrays are interleaved (re, im) pairs, as laid out by std::complex.

#include <complex>
#include <cstddef>

namespace shnw::simd {

using cplx = std::complex<double>;

struct KernelTable {
  const char* name;

  // (u, ut) <- (c*u + s*ut, w*u + c*ut), coefficients real per mode.
  void (*rotate)(std::size_t n, const double* c, const double* s, const double* w, cplx* u,
                 cplx* ut);
  // out = m * in
  void (*scale)(std::size_t n, const double* m, const cplx* in, cplx* out);
  // y += alpha * m * x
  void (*scale_add)(std::size_t n, double alpha, const double* m, const cplx* x, cplx* y);
  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const cplx* x, cplx* y);
  // x *= alpha
  void (*scal)(std::size_t n, double alpha, cplx* x);
  // sum |x|^2
  double (*sum_sq)(std::size_t n, const cplx* x);
  // sum w * |x|^2
  double (*weighted_sum_sq)(std::size_t n, const double* w, const cplx* x);
  // out = Re(a) * Re(b) + 0i
  void (*mul_real)(std::size_t n, const cplx* a, const cplx* b, cplx* out);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// The table used by the library. Picks AVX2 when available unless the
/// environment variable SHNW_SIMD=scalar is set at first use.
const KernelTable& kernels();

}  // namespace shnw::simd
