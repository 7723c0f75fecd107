#include <algorithm>
#include <cmath>
#include <numeric>

#include "shnw/diagnostics.hpp"
#include "shnw/errors.hpp"
#include "shnw/simd/kernels.hpp"

namespace shnw {

ExponentPair strichartz_exponents(int d) {
  if (d < 5) throw DomainError("Strichartz pair (3, 6d/(3d-8)) is used for d >= 5 only");
  long num = 6L * d;
  long den = 3L * d - 8;
  const long g = std::gcd(num, den);
  return {{3, 1}, {num / g, den / g}};
}

double monitor_exponent(int d) {
  if (d >= 3) return 6.0 * d / (3.0 * d - 8.0);
  return std::numeric_limits<double>::infinity();
}

double time_norm(std::span<const double> times, std::span<const double> values, double q) {
  if (times.size() != values.size()) throw DomainError("times and values differ in length");
  if (values.empty()) throw DomainError("no samples");
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  if (!(q >= 1.0)) throw DomainError("time exponent must be >= 1");
  if (values.size() < 2) throw DomainError("finite time exponent needs at least two samples");
  double acc = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (dt < 0.0) throw DomainError("samples must be time-ordered");
    acc += 0.5 * dt * (std::pow(values[i - 1], q) + std::pow(values[i], q));
  }
  return std::pow(acc, 1.0 / q);
}

double spacetime_norm(std::span<const TimeSample> samples, double q, double r) {
  std::vector<double> times, values;
  times.reserve(samples.size());
  values.reserve(samples.size());
  for (const TimeSample& s : samples) {
    times.push_back(s.t);
    values.push_back(lebesgue_norm(s.field, r));
  }
  return time_norm(times, values, q);
}

YZNorms yz_norms(std::span<const TimeSample> samples, double sdelta) {
  if (samples.empty()) throw DomainError("no samples");
  if (samples.front().field.grid().dim() != 5) throw DomainError("Y/Z norms are defined for d = 5");
  const double inf = std::numeric_limits<double>::infinity();
  const FourierMultiplier bracket = sobolev_multiplier(sdelta, SobolevFlavor::inhomogeneous);
  std::vector<TimeSample> smoothed;
  smoothed.reserve(samples.size());
  for (const TimeSample& s : samples) smoothed.push_back({s.t, apply_multiplier(s.field, bracket)});

  const double y = std::pow(spacetime_norm(samples, 10.0, 10.0 / 3.0), 10) +
                   spacetime_norm(smoothed, inf, 5.0);
  const double z = std::pow(spacetime_norm(samples, 6.0, 30.0 / 7.0), 6) +
                   std::pow(spacetime_norm(samples, inf, 10.0 / 3.0), 10) +
                   std::pow(spacetime_norm(samples, inf, 5.0), 2);
  return {y, z};
}

std::pair<double, double> interpolation_check(const Field& v) {
  if (v.grid().dim() != 5) throw DomainError("interpolation check is stated for d = 5");
  Field centered = to_fourier(v);
  centered.values()[0] = 0.0;
  const double lhs = lebesgue_norm(centered, 10.0 / 3.0);
  const double grad = sobolev_norm(centered, 1.0, SobolevFlavor::homogeneous);
  const Field smooth = apply_multiplier(centered, sobolev_multiplier(-0.25, SobolevFlavor::homogeneous));
  const double l4 = lebesgue_norm(smooth, 4.0);
  return {lhs, std::pow(grad, 0.2) * std::pow(l4, 0.8)};
}

std::string_view to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::ok: return "ok";
    case RecordStatus::completed: return "completed";
    case RecordStatus::blowup: return "blowup";
    case RecordStatus::failed: return "failed";
  }
  return "ok";
}

RecordStatus parse_status(std::string_view s) {
  if (s == "ok") return RecordStatus::ok;
  if (s == "completed") return RecordStatus::completed;
  if (s == "blowup") return RecordStatus::blowup;
  if (s == "failed") return RecordStatus::failed;
  throw FormatError("unknown status '" + std::string(s) + "'");
}

BlowupMonitor::BlowupMonitor(double threshold) : threshold_(threshold) {
  if (!(threshold > 0.0)) throw ConfigError("blowup_threshold", "must be positive");
}

void BlowupMonitor::accumulate(double t_left, double t_right, double left_norm) {
  cube_ += std::pow(std::abs(left_norm), 3) * (t_right - t_left);
  if (!tripped_at_ && value() > threshold_) tripped_at_ = t_right;
}

DiagnosticsTracker::DiagnosticsTracker(const SpectralGrid& grid, double gamma, double mu,
                                       double hs_probe_exponent, double blowup_threshold)
    : grid_(grid),
      energy_(grid, gamma, mu),
      lr_exponent_(monitor_exponent(grid.dim())),
      hs_weight_(grid.size()),
      h1_weight_(grid.size()),
      hs_symbol_(grid.size()),
      monitor_(blowup_threshold),
      phys_(grid.size()) {
  const auto w = grid.abs_frequency();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double b2 = 1.0 + w[i] * w[i];
    h1_weight_[i] = b2;
    hs_weight_[i] = std::pow(b2, hs_probe_exponent);
    hs_symbol_[i] = std::pow(b2, 0.5 * hs_probe_exponent);
  }
}

DiagnosticsRecord DiagnosticsTracker::sample(double t, std::span<const cplx> u_hat,
                                             std::span<const cplx> ut_hat) {
  const auto& k = simd::kernels();
  const double h = grid_.cell_volume();
  std::copy(u_hat.begin(), u_hat.end(), phys_.begin());
  fft::inverse(grid_, phys_);
  for (auto& z : phys_) z = cplx(z.real(), 0.0);

  DiagnosticsRecord r;
  r.t = t;
  const EnergyParts e = energy_.evaluate(u_hat, ut_hat, phys_);
  r.E_total = e.total;
  r.E_kin = e.kinetic;
  r.E_grad = e.gradient;
  r.E_pot = e.potential;
  r.L2 = std::sqrt(k.sum_sq(u_hat.size(), u_hat.data()));
  r.H1 = std::sqrt(k.weighted_sum_sq(u_hat.size(), h1_weight_.data(), u_hat.data()));
  r.Hs_probe = std::sqrt(k.weighted_sum_sq(u_hat.size(), hs_weight_.data(), u_hat.data()));
  r.Lr_space = lebesgue_norm(phys_, lr_exponent_, h);
  r.zero_mode_u = u_hat[0].real();

  if (prev_t_) monitor_.accumulate(*prev_t_, t, prev_lr_);
  r.X_accum = monitor_.value();

  if (grid_.dim() == 5) {
    const double l103 = lebesgue_norm(phys_, 10.0 / 3.0, h);
    const double l307 = lebesgue_norm(phys_, 30.0 / 7.0, h);
    const double l5 = lebesgue_norm(phys_, 5.0, h);
    CVector smooth(u_hat.size());
    k.scale(u_hat.size(), hs_symbol_.data(), u_hat.data(), smooth.data());
    fft::inverse(grid_, smooth);
    for (auto& z : smooth) z = cplx(z.real(), 0.0);
    const double hs5 = lebesgue_norm(smooth, 5.0, h);

    const double p10 = std::pow(l103, 10);
    const double p6 = std::pow(l307, 6);
    if (prev_t_) {
      const double dt = t - *prev_t_;
      y_time_integral_ += 0.5 * dt * (prev_l103_pow10_ + p10);
      z_time_integral_ += 0.5 * dt * (prev_l307_pow6_ + p6);
    }
    prev_l103_pow10_ = p10;
    prev_l307_pow6_ = p6;
    y_sup_ = std::max(y_sup_, hs5);
    z_sup_l103_ = std::max(z_sup_l103_, l103);
    z_sup_l5_ = std::max(z_sup_l5_, l5);
    r.Y_probe = y_time_integral_ + y_sup_;
    r.Z_probe = z_time_integral_ + std::pow(z_sup_l103_, 10) + z_sup_l5_ * z_sup_l5_;
  }

  prev_t_ = t;
  prev_lr_ = r.Lr_space;
  return r;
}

}  // namespace shnw
