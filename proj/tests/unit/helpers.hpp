#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "shnw/spectral.hpp"
#include "shnw/stochastic.hpp"

namespace testutil {

using namespace shnw;

inline Field random_field(const SpectralGrid& g, RngStream& rng) {
  std::vector<double> v(g.size());
  for (auto& x : v) x = rng.normal();
  return Field::from_real(g, v);
}

// real field with Fourier support |k_i| <= kmax, Nyquist excluded
inline Field band_limited(const SpectralGrid& g, RngStream& rng, int kmax, double decay = 1.0) {
  CVector c(g.size(), cplx(0.0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const LatticeIndex k = g.lattice_index(i);
    bool inside = true;
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      inside = inside && std::abs(k[a]) <= kmax && 2 * std::abs(k[a]) < g.points();
      k2 += double(k[a]) * k[a];
    }
    const double re = rng.normal(), im = rng.normal();
    if (inside) c[i] = std::pow(1.0 + k2, -0.5 * decay) * cplx(re, im);
  }
  Field p = to_physical(Field(g, Representation::fourier, std::move(c), false));
  for (auto& z : p.values()) z = cplx(z.real(), 0.0);
  p.set_real(true);
  return p;
}

inline double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rel_diff(const Field& a, const Field& b) {
  const Field fa = to_fourier(a), fb = to_fourier(b);
  return max_diff(fa.values(), fb.values()) / std::max(max_abs(fa.values()), 1e-300);
}

}  // namespace testutil
