#include "shnw/diagnostics.hpp"
#include "shnw/simd/kernels.hpp"

namespace shnw {

EnergyEvaluator::EnergyEvaluator(const SpectralGrid& grid, double gamma, double mu)
    : grid_(grid), mu_(mu), grad_weight_(grid.size()) {
  if (mu != 0.0) riesz_ = riesz_multiplier(grid, gamma, mu).sample(grid).re;
  const auto w = grid.abs_frequency();
  for (std::size_t i = 0; i < w.size(); ++i) grad_weight_[i] = w[i] * w[i];
}

double EnergyEvaluator::potential(std::span<const cplx> u_phys) const {
  if (riesz_.empty()) return 0.0;
  const auto& k = simd::kernels();
  CVector w(u_phys.size());
  k.mul_real(w.size(), u_phys.data(), u_phys.data(), w.data());
  fft::forward(grid_, w);
  return 0.25 * k.weighted_sum_sq(w.size(), riesz_.data(), w.data());
}

EnergyParts EnergyEvaluator::evaluate(std::span<const cplx> u_hat, std::span<const cplx> ut_hat,
                                      std::span<const cplx> u_phys) const {
  const auto& k = simd::kernels();
  EnergyParts e;
  e.kinetic = 0.5 * k.sum_sq(ut_hat.size(), ut_hat.data());
  e.gradient = 0.5 * k.weighted_sum_sq(u_hat.size(), grad_weight_.data(), u_hat.data());
  e.potential = potential(u_phys);
  e.total = e.kinetic + e.gradient + e.potential;
  return e;
}

EnergyParts EnergyEvaluator::operator()(const WaveState& state) const {
  const Field u = to_fourier(state.u);
  const Field ut = to_fourier(state.ut);
  const Field up = to_physical(state.u);
  return evaluate(u.values(), ut.values(), up.values());
}

EnergyParts energy(const WaveState& state, double gamma, double mu) {
  return EnergyEvaluator(state.u.grid(), gamma, mu)(state);
}

}  // namespace shnw
