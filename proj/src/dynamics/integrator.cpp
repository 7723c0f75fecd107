#include <algorithm>
#include <cmath>

#include "shnw/dynamics.hpp"
#include "shnw/errors.hpp"
#include "shnw/simd/kernels.hpp"

namespace shnw {
namespace {

void to_fourier_inplace(WaveState& s) {
  if (s.u.representation() != Representation::fourier) s.u = to_fourier(s.u);
  if (s.ut.representation() != Representation::fourier) s.ut = to_fourier(s.ut);
}

ConvolutionStepper make_noise(const SimConfig& cfg, const SpectralGrid& grid) {
  const NoiseModel model = cfg.noise.model(cfg.master_seed);
  const auto trunc = truncation_table(grid, cfg.truncation_N);
  return ConvolutionStepper(grid, model, cfg.dt, trunc ? &*trunc : nullptr);
}

}  // namespace

Integrator::Integrator(const SimConfig& cfg)
    : grid_(cfg.grid()),
      dt_(cfg.dt),
      sweeps_(cfg.picard_iterations),
      formulation_(cfg.formulation),
      drift_(grid_, cfg.dt),
      hartree_(grid_, cfg.gamma, cfg.mu, cfg.truncation_N, cfg.dealias),
      noise_(make_noise(cfg, grid_)),
      pos_(grid_.size()),
      n_left_(grid_.size()),
      n_right_(grid_.size()),
      cached_pos_(grid_.size()) {
  if (sweeps_ < 1) throw ConfigError("picard_iterations", "must be >= 1");
}

void Integrator::nonlinearity(std::span<const cplx> pos, std::span<cplx> out, double t) {
  hartree_.apply(pos, out, t);
}

void Integrator::step(WaveState& state, WaveState* psi, RngStream& rng) {
  if (formulation_ == Formulation::residual_v && psi == nullptr)
    throw ConfigError("formulation", "residual_v needs the stochastic convolution state");
  to_fourier_inplace(state);
  if (psi != nullptr) to_fourier_inplace(*psi);
  const bool split = formulation_ == Formulation::residual_v;
  const auto& k = simd::kernels();
  const std::size_t n = grid_.size();
  const double half = 0.5 * dt_;
  auto u = state.u.values();
  auto ut = state.ut.values();

  // position the nonlinearity sees: u, or v + psi
  const auto load_position = [&]() {
    std::copy(u.begin(), u.end(), pos_.begin());
    if (split) k.axpy(n, 1.0, psi->u.values().data(), pos_.data());
  };

  if (hartree_.active()) {
    load_position();
    if (!(cache_valid_ && std::equal(pos_.begin(), pos_.end(), cached_pos_.begin())))
      nonlinearity(pos_, n_left_, state.t);
    else
      std::swap(n_left_, n_right_);
    k.axpy(n, -half, n_left_.data(), ut.data());
  }

  drift_.advance(u, ut);
  if (split) {
    drift_.advance(psi->u.values(), psi->ut.values());
    if (noise_.active()) noise_.add_increment(rng, psi->u.values(), psi->ut.values());
    psi->t += dt_;
  } else if (noise_.active()) {
    noise_.add_increment(rng, u, ut);
  }
  state.t += dt_;

  cache_valid_ = false;
  if (hartree_.active()) {
    load_position();
    if (sweeps_ == 1) {
      // one sweep from the linear predictor: undo the left kick on the position
      CVector pred(pos_);
      k.scale_add(n, half, drift_.q_table().data(), n_left_.data(), pred.data());
      nonlinearity(pred, n_right_, state.t);
    } else {
      nonlinearity(pos_, n_right_, state.t);
      std::copy(pos_.begin(), pos_.end(), cached_pos_.begin());
      cache_valid_ = true;
    }
    k.axpy(n, -half, n_right_.data(), ut.data());
  }
}

std::pair<WaveState, std::optional<WaveState>> step(const WaveState& state,
                                                    const std::optional<WaveState>& psi,
                                                    const SimConfig& cfg, RngStream& rng) {
  Integrator integ(cfg);
  WaveState s = state;
  std::optional<WaveState> p = psi;
  integ.step(s, p ? &*p : nullptr, rng);
  return {std::move(s), std::move(p)};
}

WaveState residual_split(const WaveState& u, const WaveState& psi) {
  if (!(u.u.grid() == psi.u.grid())) throw ConfigError("psi", "grid mismatch");
  if (u.t != psi.t) throw ConfigError("psi", "time mismatch");
  const auto diff = [](const Field& a, const Field& b) {
    const Field fa = to_fourier(a);
    const Field fb = to_fourier(b);
    Field out = fa;
    simd::kernels().axpy(out.values().size(), -1.0, fb.values().data(), out.values().data());
    out.set_real(fa.is_real() && fb.is_real());
    return a.representation() == Representation::physical ? to_physical(out) : out;
  };
  return WaveState{diff(u.u, psi.u), diff(u.ut, psi.ut), u.t};
}

}  // namespace shnw
