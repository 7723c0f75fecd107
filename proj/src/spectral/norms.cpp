#include <cmath>
#include <limits>

#include "shnw/errors.hpp"
#include "shnw/simd/kernels.hpp"
#include "shnw/spectral.hpp"

namespace shnw {

double lebesgue_norm(std::span<const cplx> v, double r, double h) {
  if (!(r >= 1.0)) throw DomainError("Lebesgue exponent must be >= 1");
  if (std::isinf(r)) {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  if (r == 2.0) return std::sqrt(simd::kernels().sum_sq(v.size(), v.data()) * h);
  double acc = 0.0;
  for (const cplx& z : v) {
    const double a = z.imag() == 0.0 ? std::abs(z.real()) : std::abs(z);
    acc += std::pow(a, r);
  }
  return std::pow(acc * h, 1.0 / r);
}

double lebesgue_norm(const Field& f, double r) {
  const Field p = to_physical(f);
  return lebesgue_norm(p.values(), r, p.grid().cell_volume());
}

double sobolev_norm(const Field& f, double s, SobolevFlavor flavor) {
  const Field fh = to_fourier(f);
  const MultiplierTable m = sobolev_multiplier(s, flavor).sample(f.grid());
  RVector w(m.re.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = m.re[i] * m.re[i];
  const auto v = fh.values();
  return std::sqrt(simd::kernels().weighted_sum_sq(v.size(), w.data(), v.data()));
}

}  // namespace shnw
