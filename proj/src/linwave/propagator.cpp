#include <cmath>

#include "shnw/errors.hpp"
#include "shnw/linwave.hpp"
#include "shnw/simd/kernels.hpp"

namespace shnw {

WaveState WaveState::zeros(const SpectralGrid& grid, Representation rep) {
  return WaveState{Field::zeros(grid, rep), Field::zeros(grid, rep), 0.0};
}

Propagator::Propagator(const SpectralGrid& grid, double h)
    : h_(h), cos_(grid.size()), q_(grid.size()), mws_(grid.size()) {
  const auto w = grid.abs_frequency();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (w[i] == 0.0) {
      cos_[i] = 1.0;
      q_[i] = h;
      mws_[i] = 0.0;
    } else {
      const double s = std::sin(h * w[i]);
      cos_[i] = std::cos(h * w[i]);
      q_[i] = s / w[i];
      mws_[i] = -w[i] * s;
    }
  }
}

void Propagator::advance(std::span<cplx> u_hat, std::span<cplx> ut_hat) const {
  simd::kernels().rotate(u_hat.size(), cos_.data(), q_.data(), mws_.data(), u_hat.data(),
                         ut_hat.data());
}

Field apply_Q(const Field& f, double t) {
  const Propagator p(f.grid(), t);
  Field out = to_fourier(f);
  auto v = out.values();
  simd::kernels().scale(v.size(), p.q_table().data(), v.data(), v.data());
  return out;
}

WaveState propagate(const WaveState& state, double t) {
  if (!(state.u.grid() == state.ut.grid())) throw ConfigError("state", "u and ut grids differ");
  const Propagator p(state.u.grid(), t);
  WaveState out{to_fourier(state.u), to_fourier(state.ut), state.t + t};
  p.advance(out.u.values(), out.ut.values());
  return out;
}

Field apply_Stilde(const WaveState& state, double t) {
  const SpectralGrid& grid = state.u.grid();
  const Field u0 = to_fourier(state.u);
  const Field u1 = to_fourier(state.ut);
  Field out = Field::zeros(grid, Representation::fourier, u0.is_real() && u1.is_real());
  const auto w = grid.abs_frequency();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double bracket = std::sqrt(1.0 + w[i] * w[i]);
    o[i] = (-w[i] * std::sin(t * w[i]) * u0.values()[i] + std::cos(t * w[i]) * u1.values()[i]) /
           bracket;
  }
  return out;
}

double linear_energy(const WaveState& state) {
  const double g = sobolev_norm(state.u, 1.0, SobolevFlavor::homogeneous);
  const double v = sobolev_norm(state.ut, 0.0, SobolevFlavor::inhomogeneous);
  return 0.5 * (g * g + v * v);
}

}  // namespace shnw
