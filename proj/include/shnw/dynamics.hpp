#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shnw/diagnostics.hpp"
#include "shnw/linwave.hpp"
#include "shnw/spectral.hpp"
#include "shnw/stochastic.hpp"

namespace shnw {

// -- configuration -----------------------------------------------------------

enum class Formulation { full_u, residual_v };
enum class InitialDataKind { zero, snapshot, randomized };
enum class NoiseProfile { flat, sobolev };

struct NoiseConfig {
  double amplitude = 0.0;
  /// |xi| cutoff; unset means every lattice mode is forced.
  std::optional<double> cutoff;
  NoiseProfile profile = NoiseProfile::flat;
  double sobolev_s = 0.0;

  NoiseModel model(std::uint64_t seed) const;
};

struct InitialDataConfig {
  InitialDataKind kind = InitialDataKind::zero;
  std::string path;  // snapshot: WaveState file
  std::string u0;    // randomized: Field files
  std::string u1;
  RandomizationSpec randomization;
};

struct SimConfig {
  int d = 3;
  int M = 16;
  double L = 6.283185307179586;
  double gamma = 1.0;
  double mu = 1.0;
  double dt = 1e-3;
  double t_final = 1.0;
  int sample_every = 1;
  std::optional<double> truncation_N;
  int picard_iterations = 2;
  bool dealias = false;
  NoiseConfig noise;
  InitialDataConfig initial_data;
  Formulation formulation = Formulation::full_u;
  double blowup_threshold = 1e4;
  int trajectories = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> snapshot_times;
  double hs_probe_s = 0.75;
  double hs_probe_delta = 0.01;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
  SpectralGrid grid() const { return SpectralGrid(d, M, L); }
  /// Number of steps; the last one may overshoot t_final by less than dt.
  std::size_t steps() const;
};

// -- nonlinearity ------------------------------------------------------------

/// N(u) = (V * u^2) u with V = mu |x|^{-gamma}, on Fourier coefficients.
/// Tables are built once; apply() is four transforms.
class HartreeOperator {
 public:
  HartreeOperator(const SpectralGrid& grid, double gamma, double mu,
                  std::optional<double> truncation = std::nullopt, bool dealias = false);

  bool active() const noexcept { return !riesz_.empty(); }
  /// Writes N(u)^ into n_hat. Throws IntegrationError on non-finite output.
  void apply(std::span<const cplx> u_hat, std::span<cplx> n_hat, double t = 0.0);
  /// P_{<=N} symbol, or nullptr when it is the identity on this grid.
  const MultiplierTable* truncation() const noexcept {
    return truncation_ ? &*truncation_ : nullptr;
  }

 private:
  SpectralGrid grid_;
  RVector riesz_;  // empty when mu == 0
  std::optional<MultiplierTable> truncation_;
  RVector dealias_;  // empty when off
  CVector u_phys_;
  CVector work_;
};

/// Physical-space N(u) for a real field.
Field hartree_nonlinearity(const Field& u, double gamma, double mu,
                           std::optional<double> truncation = std::nullopt, bool dealias = false);

/// P_{<=N} as a table, or nothing when every lattice mode has |xi| <= N.
std::optional<MultiplierTable> truncation_table(const SpectralGrid& grid,
                                                std::optional<double> n);

// -- integrator --------------------------------------------------------------

/// Exponential trapezoid on the Duhamel formula, written as
/// kick(dt/2) - exact drift - noise - kick(dt/2). The right endpoint of the
/// quadrature comes from K Picard sweeps starting at the linearly propagated
/// state; from K = 2 on the sweeps have converged exactly because the drifted
/// position does not depend on the right endpoint.
class Integrator {
 public:
  explicit Integrator(const SimConfig& cfg);

  double dt() const noexcept { return dt_; }
  Formulation formulation() const noexcept { return formulation_; }

  /// Advances `state` (u, or v for residual_v) and `psi` by one step.
  /// residual_v requires psi. States are moved to Fourier representation.
  void step(WaveState& state, WaveState* psi, RngStream& rng);

 private:
  void nonlinearity(std::span<const cplx> pos, std::span<cplx> out, double t);

  SpectralGrid grid_;
  double dt_;
  int sweeps_;
  Formulation formulation_;
  Propagator drift_;
  HartreeOperator hartree_;
  ConvolutionStepper noise_;
  CVector pos_, n_left_, n_right_;
  CVector cached_pos_;
  bool cache_valid_ = false;
};

/// One step with a throwaway Integrator.
std::pair<WaveState, std::optional<WaveState>> step(const WaveState& state,
                                                    const std::optional<WaveState>& psi,
                                                    const SimConfig& cfg, RngStream& rng);

/// v = u - psi componentwise. Throws ConfigError on grid or time mismatch.
WaveState residual_split(const WaveState& u, const WaveState& psi);

// -- trajectories ------------------------------------------------------------

struct TrajectoryRecord {
  std::size_t index = 0;
  RecordStatus status = RecordStatus::ok;
  /// Diagnostics of u; in residual_v also of v and psi.
  std::vector<DiagnosticsRecord> u;
  std::vector<DiagnosticsRecord> v;
  std::vector<DiagnosticsRecord> psi;
  std::optional<double> blowup_time;
  std::vector<WaveState> snapshots;  // of u, at the configured times
  std::optional<WaveState> final_state;  // u at the last step taken
  std::string message;
};

/// Integration failure; carries everything recorded before it.
class TrajectoryError : public std::runtime_error {
 public:
  TrajectoryError(const std::string& what, TrajectoryRecord partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const TrajectoryRecord& partial() const noexcept { return partial_; }

 private:
  TrajectoryRecord partial_;
};

/// Called at every sample with the step count and u (Fourier).
using SampleObserver = std::function<void(std::size_t step, const WaveState& u)>;

/// Initial (u0, u1) for trajectory `index` as configured (files are read
/// here; randomized data uses its own substream).
WaveState initial_state(const SimConfig& cfg, std::size_t index);

TrajectoryRecord run_trajectory(const SimConfig& cfg, std::size_t index);
TrajectoryRecord run_trajectory(const SimConfig& cfg, std::size_t index, const WaveState& initial,
                                const SampleObserver& observer = {});

}  // namespace shnw
