#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shnw/dynamics.hpp"
#include "shnw/errors.hpp"
#include "shnw/io.hpp"
#include "shnw/simd/kernels.hpp"

namespace shnw {

NoiseModel NoiseConfig::model(std::uint64_t seed) const {
  if (amplitude == 0.0) return NoiseModel::off();
  const double c = cutoff.value_or(std::numeric_limits<double>::infinity());
  if (profile == NoiseProfile::sobolev) return NoiseModel::sobolev(amplitude, sobolev_s, c, seed);
  return NoiseModel::flat(amplitude, c, seed);
}

void SimConfig::validate() const {
  (void)grid();
  if (!(gamma > 0.0 && gamma < d))
    throw ConfigError("gamma", "potential exponent out of range: need 0 < gamma < d");
  if (!std::isfinite(mu)) throw ConfigError("mu", "must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (!(t_final >= dt) || !std::isfinite(t_final)) throw ConfigError("t_final", "must be >= dt");
  if (sample_every < 1) throw ConfigError("sample_every", "must be >= 1");
  if (picard_iterations < 1) throw ConfigError("picard_iterations", "must be >= 1");
  if (truncation_N && !(*truncation_N > 0.0 && is_dyadic(*truncation_N)))
    throw ConfigError("truncation_N", "must be a power of two");
  if (!(blowup_threshold > 0.0)) throw ConfigError("blowup_threshold", "must be positive");
  if (trajectories < 1) throw ConfigError("trajectories", "must be >= 1");
  if (!(noise.amplitude >= 0.0) || !std::isfinite(noise.amplitude))
    throw ConfigError("noise.amplitude", "must be finite and >= 0");
  if (noise.cutoff && !(*noise.cutoff >= 0.0)) throw ConfigError("noise.cutoff", "must be >= 0");
  if (!std::isfinite(noise.sobolev_s)) throw ConfigError("noise.sobolev_s", "must be finite");
  if (initial_data.kind == InitialDataKind::snapshot && initial_data.path.empty())
    throw ConfigError("initial_data.path", "required for snapshot data");
  if (initial_data.kind == InitialDataKind::randomized) {
    if (initial_data.u0.empty()) throw ConfigError("initial_data.u0", "required for randomized data");
    if (initial_data.u1.empty()) throw ConfigError("initial_data.u1", "required for randomized data");
    if (L < 2.0 * std::numbers::pi)
      throw ConfigError("L", "randomized data needs L >= 2 pi");
  }
  for (double ts : snapshot_times)
    if (!(ts >= 0.0 && ts <= t_final)) throw ConfigError("snapshot_times", "must lie in [0, t_final]");
  if (!std::isfinite(hs_probe_s) || !std::isfinite(hs_probe_delta))
    throw ConfigError("hs_probe_s", "must be finite");
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

WaveState initial_state(const SimConfig& cfg, std::size_t index) {
  const SpectralGrid grid = cfg.grid();
  switch (cfg.initial_data.kind) {
    case InitialDataKind::zero:
      return WaveState::zeros(grid);
    case InitialDataKind::snapshot: {
      WaveState s = read_state(cfg.initial_data.path);
      if (!(s.u.grid() == grid)) throw ConfigError("initial_data.path", "snapshot grid differs from config");
      s.t = 0.0;
      return s;
    }
    case InitialDataKind::randomized: {
      const Field u0 = read_field(std::filesystem::path(cfg.initial_data.u0));
      const Field u1 = read_field(std::filesystem::path(cfg.initial_data.u1));
      if (!(u0.grid() == grid)) throw ConfigError("initial_data.u0", "field grid differs from config");
      if (!(u1.grid() == grid)) throw ConfigError("initial_data.u1", "field grid differs from config");
      RngStream rng(cfg.initial_data.randomization.seed, index, Substream::randomize);
      auto [a, b] = wiener_randomize(u0, u1, cfg.initial_data.randomization, rng);
      return WaveState{std::move(a), std::move(b), 0.0};
    }
  }
  throw ConfigError("initial_data.kind", "unknown kind");
}

TrajectoryRecord run_trajectory(const SimConfig& cfg, std::size_t index) {
  return run_trajectory(cfg, index, initial_state(cfg, index));
}

TrajectoryRecord run_trajectory(const SimConfig& cfg, std::size_t index, const WaveState& initial,
                                const SampleObserver& observer) {
  cfg.validate();
  const SpectralGrid grid = cfg.grid();
  if (!(initial.u.grid() == grid) || !(initial.ut.grid() == grid))
    throw ConfigError("initial_data", "initial state grid differs from config");
  const bool split = cfg.formulation == Formulation::residual_v;
  const double probe = cfg.hs_probe_s - cfg.hs_probe_delta;
  const double inf = std::numeric_limits<double>::infinity();

  Integrator integ(cfg);
  RngStream rng(cfg.master_seed, index, Substream::noise);

  WaveState state{to_fourier(initial.u), to_fourier(initial.ut), 0.0};
  std::optional<WaveState> psi;
  if (split) psi = WaveState::zeros(grid);

  DiagnosticsTracker track_u(grid, cfg.gamma, cfg.mu, probe, split ? inf : cfg.blowup_threshold);
  std::optional<DiagnosticsTracker> track_v, track_psi;
  if (split) {
    track_v.emplace(grid, cfg.gamma, cfg.mu, probe, cfg.blowup_threshold);
    track_psi.emplace(grid, cfg.gamma, cfg.mu, probe, inf);
  }
  const DiagnosticsTracker& monitor_owner = split ? *track_v : track_u;

  std::vector<std::size_t> snapshot_steps;
  for (double ts : cfg.snapshot_times)
    snapshot_steps.push_back(static_cast<std::size_t>(std::llround(ts / cfg.dt)));

  TrajectoryRecord rec;
  rec.index = index;
  const std::size_t nsteps = cfg.steps();

  WaveState u_full = state;
  const auto reconstruct = [&]() -> const WaveState& {
    if (!split) return state;
    u_full.t = state.t;
    const std::size_t n = grid.size();
    std::copy(state.u.values().begin(), state.u.values().end(), u_full.u.values().begin());
    std::copy(state.ut.values().begin(), state.ut.values().end(), u_full.ut.values().begin());
    simd::kernels().axpy(n, 1.0, psi->u.values().data(), u_full.u.values().data());
    simd::kernels().axpy(n, 1.0, psi->ut.values().data(), u_full.ut.values().data());
    return u_full;
  };

  const auto sample = [&](std::size_t n) {
    const WaveState& u = reconstruct();
    DiagnosticsRecord r = track_u.sample(u.t, u.u.values(), u.ut.values());
    if (!std::isfinite(r.E_total)) throw IntegrationError("non-finite state", u.t);
    rec.u.push_back(r);
    if (split) {
      rec.v.push_back(track_v->sample(state.t, state.u.values(), state.ut.values()));
      rec.psi.push_back(track_psi->sample(psi->t, psi->u.values(), psi->ut.values()));
    }
    if (observer) observer(n, u);
  };

  try {
    for (std::size_t n = 0;; ++n) {
      if (std::find(snapshot_steps.begin(), snapshot_steps.end(), n) != snapshot_steps.end())
        rec.snapshots.push_back(reconstruct());
      if (n % static_cast<std::size_t>(cfg.sample_every) == 0 || n == nsteps) {
        sample(n);
        if (monitor_owner.monitor().tripped()) {
          rec.status = RecordStatus::blowup;
          rec.blowup_time = monitor_owner.monitor().tripped_at();
          break;
        }
      }
      if (n == nsteps) {
        rec.status = RecordStatus::completed;
        break;
      }
      integ.step(state, split ? &*psi : nullptr, rng);
      state.t = static_cast<double>(n + 1) * cfg.dt;
      if (split) psi->t = state.t;
    }
  } catch (const IntegrationError& e) {
    rec.status = RecordStatus::failed;
    rec.message = e.what();
    // the last row carries the terminal status of the trajectory
    for (auto* rows : {&rec.u, &rec.v, &rec.psi})
      if (!rows->empty()) rows->back().status = rec.status;
    rec.final_state = reconstruct();
    throw TrajectoryError(e.what(), std::move(rec));
  }

  for (auto* rows : {&rec.u, &rec.v, &rec.psi})
    if (!rows->empty()) rows->back().status = rec.status;
  rec.final_state = reconstruct();
  return rec;
}

}  // namespace shnw
