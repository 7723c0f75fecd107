#include <cmath>
#include <numbers>

#include "shnw/errors.hpp"
#include "shnw/simd/kernels.hpp"
#include "shnw/stochastic.hpp"

namespace shnw {
namespace {

// (y - sin y) / y^3, accurate for small y.
double x_minus_sin_over_cube(double y) {
  if (std::abs(y) >= 1.0) return (y - std::sin(y)) / (y * y * y);
  const double y2 = y * y;
  double term = 1.0 / 6.0;
  double sum = term;
  for (int k = 1; k < 30; ++k) {
    term *= -y2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

NoiseModel NoiseModel::off() { return NoiseModel{}; }

NoiseModel NoiseModel::flat(double amplitude, double cutoff, std::uint64_t seed) {
  return NoiseModel{FourierMultiplier::radial([amplitude](double) { return amplitude; }, amplitude),
                    cutoff, seed};
}

NoiseModel NoiseModel::sobolev(double amplitude, double s, double cutoff, std::uint64_t seed) {
  return NoiseModel{
      FourierMultiplier::radial(
          [amplitude, s](double r) { return amplitude * std::pow(1.0 + r * r, -0.5 * s); },
          amplitude),
      cutoff, seed};
}

MultiplierTable NoiseModel::table(const SpectralGrid& grid) const {
  MultiplierTable t = multiplier.sample(grid);
  const auto w = grid.abs_frequency();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > cutoff) {
      t.re[i] = 0.0;
      if (!t.im.empty()) t.im[i] = 0.0;
    }
  }
  return t;
}

double hs_norm(const NoiseModel& noise, const SpectralGrid& grid, double s) {
  const MultiplierTable t = noise.table(grid);
  const auto w = grid.abs_frequency();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double m2 = t.re[i] * t.re[i] + (t.im.empty() ? 0.0 : t.im[i] * t.im[i]);
    if (m2 != 0.0) acc += std::pow(1.0 + w[i] * w[i], s) * m2;
  }
  return std::sqrt(acc);
}

StepNoiseCovariance step_covariance(double omega, double h) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  if (!(omega >= 0.0)) throw DomainError("frequency must be nonnegative");
  const double x = omega * h;
  StepNoiseCovariance cov{0.0, 0.0, 0.0, omega, h};
  if (x < 1e-4) {
    const double w2 = omega * omega;
    const double h2 = h * h;
    cov.a = h * h2 * (1.0 / 3.0 - w2 * h2 / 15.0 + 2.0 * w2 * w2 * h2 * h2 / 315.0);
    cov.b = h * (1.0 - w2 * h2 / 3.0 + w2 * w2 * h2 * h2 / 15.0);
    cov.c = h2 * (0.5 - w2 * h2 / 6.0 + w2 * w2 * h2 * h2 / 45.0);
    return cov;
  }
  // a = (2x - sin 2x) / (4 w^3), written to avoid cancellation for small x.
  cov.a = h * h * h * 2.0 * x_minus_sin_over_cube(2.0 * x);
  cov.b = h * (0.5 + std::sin(2.0 * x) / (4.0 * x));
  const double sx = std::sin(x) / x;
  cov.c = 0.5 * h * h * sx * sx;
  return cov;
}

ConvolutionStepper::ConvolutionStepper(const SpectralGrid& grid, const NoiseModel& noise, double h,
                                       const MultiplierTable* filter) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  const MultiplierTable t = noise.table(grid);
  if (!t.hermitian) throw DomainError("noise symbol must satisfy m(-xi) = conj(m(xi))");
  const auto w = grid.abs_frequency();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t p = grid.conjugate_index(k);
    if (p < k) continue;
    cplx m(t.re[k], t.im.empty() ? 0.0 : t.im[k]);
    if (m == cplx(0.0)) continue;
    // filtered modes still consume their draws so the path does not depend
    // on the filter
    if (filter != nullptr) m *= filter->re[k];
    const StepNoiseCovariance cov = step_covariance(w[k], h);
    Mode mode{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(p), 0.0, 0.0, 0.0, m};
    mode.l11 = std::sqrt(cov.a);
    mode.l21 = cov.a > 0.0 ? cov.c / mode.l11 : 0.0;
    mode.l22 = std::sqrt(std::max(cov.b - mode.l21 * mode.l21, 0.0));
    modes_.push_back(mode);
  }
}

void ConvolutionStepper::add_increment(RngStream& rng, std::span<cplx> u_hat,
                                       std::span<cplx> ut_hat) const {
  constexpr double kHalf = std::numbers::sqrt2 / 2.0;
  for (const Mode& md : modes_) {
    if (md.k == md.partner) {
      // Self-conjugate lattice mode: a real Brownian motion drives it.
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      u_hat[md.k] += md.m * (md.l11 * z1);
      ut_hat[md.k] += md.m * (md.l21 * z1 + md.l22 * z2);
      continue;
    }
    const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
    const cplx z1(kHalf * a, kHalf * b);
    const cplx z2(kHalf * c, kHalf * d);
    const cplx du = md.m * (md.l11 * z1);
    const cplx dv = md.m * (md.l21 * z1 + md.l22 * z2);
    u_hat[md.k] += du;
    ut_hat[md.k] += dv;
    u_hat[md.partner] += std::conj(du);
    ut_hat[md.partner] += std::conj(dv);
  }
}

WaveState advance_convolution(const WaveState& psi, const NoiseModel& noise, double h,
                              RngStream& rng) {
  WaveState out = propagate(psi, h);
  const ConvolutionStepper stepper(psi.u.grid(), noise, h);
  stepper.add_increment(rng, out.u.values(), out.ut.values());
  return out;
}

}  // namespace shnw
