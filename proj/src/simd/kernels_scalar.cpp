#include "shnw/simd/kernels.hpp"

namespace shnw::simd {
namespace {

void rotate(std::size_t n, const double* c, const double* s, const double* w, cplx* u, cplx* ut) {
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = u[k];
    const cplx b = ut[k];
    u[k] = c[k] * a + s[k] * b;
    ut[k] = w[k] * a + c[k] * b;
  }
}

void scale(std::size_t n, const double* m, const cplx* in, cplx* out) {
  for (std::size_t k = 0; k < n; ++k) out[k] = m[k] * in[k];
}

void scale_add(std::size_t n, double alpha, const double* m, const cplx* x, cplx* y) {
  for (std::size_t k = 0; k < n; ++k) y[k] += (alpha * m[k]) * x[k];
}

void axpy(std::size_t n, double alpha, const cplx* x, cplx* y) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void scal(std::size_t n, double alpha, cplx* x) {
  for (std::size_t k = 0; k < n; ++k) x[k] *= alpha;
}

double sum_sq(std::size_t n, const cplx* x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  return acc;
}

double weighted_sum_sq(std::size_t n, const double* w, const cplx* x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += w[k] * (x[k].real() * x[k].real() + x[k].imag() * x[k].imag());
  return acc;
}

void mul_real(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
  for (std::size_t k = 0; k < n; ++k) out[k] = cplx(a[k].real() * b[k].real(), 0.0);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", rotate, scale,           scale_add, axpy,
                                 scal,     sum_sq, weighted_sum_sq, mul_real};
  return table;
}

}  // namespace shnw::simd
