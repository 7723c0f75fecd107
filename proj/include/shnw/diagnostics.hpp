#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shnw/linwave.hpp"
#include "shnw/spectral.hpp"

namespace shnw {

// -- energy ------------------------------------------------------------------

struct EnergyParts {
  double total = 0.0;
  double kinetic = 0.0;    // (1/2) ||ut||^2
  double gradient = 0.0;   // (1/2) ||grad u||^2
  double potential = 0.0;  // (1/4) <u^2, V * u^2>
};

/// Energy on one grid with the Riesz table built once. The potential term is
/// evaluated in Fourier space, (1/4) sum_k m(xi_k) |(u^2)_k|^2, which is a sum
/// of nonnegative terms when mu > 0.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const SpectralGrid& grid, double gamma, double mu);

  EnergyParts operator()(const WaveState& state) const;
  /// Fourier coefficients of u and ut plus u in physical space (real).
  EnergyParts evaluate(std::span<const cplx> u_hat, std::span<const cplx> ut_hat,
                       std::span<const cplx> u_phys) const;
  double potential(std::span<const cplx> u_phys) const;

 private:
  SpectralGrid grid_;
  double mu_;
  RVector riesz_;  // empty when mu == 0
  RVector grad_weight_;
};

EnergyParts energy(const WaveState& state, double gamma, double mu);

// -- exponents ---------------------------------------------------------------

struct Rational {
  long num;
  long den;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

struct ExponentPair {
  Rational q;
  Rational r;
};

/// (3, 6d/(3d-8)) in lowest terms; DomainError for d < 5.
ExponentPair strichartz_exponents(int d);

/// Spatial exponent of the blow-up monitor: 6d/(3d-8) where that is a valid
/// Lebesgue exponent (d >= 3), infinity below.
double monitor_exponent(int d);

// -- space-time norms --------------------------------------------------------

struct TimeSample {
  double t;
  Field field;
};

/// L^q in time of the values (trapezoid over sample times; max for q = inf).
/// Needs >= 2 samples for finite q.
double time_norm(std::span<const double> times, std::span<const double> values, double q);
double spacetime_norm(std::span<const TimeSample> samples, double q, double r);

struct YZNorms {
  double Y;
  double Z;
};

/// Y = ||f||^10_{L^10 L^{10/3}} + ||<grad>^{s-delta} f||_{L^inf L^5}
/// Z = ||f||^6_{L^6 L^{30/7}} + ||f||^10_{L^inf L^{10/3}} + ||f||^2_{L^inf L^5}
/// d = 5 only.
YZNorms yz_norms(std::span<const TimeSample> samples, double sdelta);

/// (||v||_{L^{10/3}}, ||grad v||_2^{1/5} || |grad|^{-1/4} v ||_4^{4/5}) on the
/// mean-zero part of v, d = 5.
std::pair<double, double> interpolation_check(const Field& v);

/// lhs <= C rhs for interpolation_check, calibrated on the seeded corpus of
/// 100 band-limited fields (see tests/unit/test_diagnostics.cpp) and frozen.
inline constexpr double kInterpolationBound = 1.0;

// -- records -----------------------------------------------------------------

enum class RecordStatus { ok, completed, blowup, failed };

std::string_view to_string(RecordStatus s);
RecordStatus parse_status(std::string_view s);

struct DiagnosticsRecord {
  double t = 0.0;
  double E_total = 0.0;
  double E_kin = 0.0;
  double E_grad = 0.0;
  double E_pot = 0.0;
  double L2 = 0.0;
  double H1 = 0.0;
  double Hs_probe = 0.0;
  double Lr_space = 0.0;
  double X_accum = 0.0;
  double Y_probe = std::numeric_limits<double>::quiet_NaN();
  double Z_probe = std::numeric_limits<double>::quiet_NaN();
  double zero_mode_u = 0.0;
  RecordStatus status = RecordStatus::ok;
};

/// Numeric CSV columns in schema order (status excluded).
inline constexpr std::array<std::pair<std::string_view, double DiagnosticsRecord::*>, 13>
    kRecordColumns{{{"t", &DiagnosticsRecord::t},
                    {"E_total", &DiagnosticsRecord::E_total},
                    {"E_kin", &DiagnosticsRecord::E_kin},
                    {"E_grad", &DiagnosticsRecord::E_grad},
                    {"E_pot", &DiagnosticsRecord::E_pot},
                    {"L2", &DiagnosticsRecord::L2},
                    {"H1", &DiagnosticsRecord::H1},
                    {"Hs_probe", &DiagnosticsRecord::Hs_probe},
                    {"Lr_space", &DiagnosticsRecord::Lr_space},
                    {"X_accum", &DiagnosticsRecord::X_accum},
                    {"Y_probe", &DiagnosticsRecord::Y_probe},
                    {"Z_probe", &DiagnosticsRecord::Z_probe},
                    {"zero_mode_u", &DiagnosticsRecord::zero_mode_u}}};

/// Running X-norm (L^3 in time, left-endpoint rule) with a trip level.
class BlowupMonitor {
 public:
  explicit BlowupMonitor(double threshold);

  /// Adds |left_norm|^3 (t_right - t_left); trips at t_right the first time
  /// the X-norm exceeds the threshold.
  void accumulate(double t_left, double t_right, double left_norm);

  double value() const noexcept { return std::cbrt(cube_); }
  double threshold() const noexcept { return threshold_; }
  bool tripped() const noexcept { return tripped_at_.has_value(); }
  std::optional<double> tripped_at() const noexcept { return tripped_at_; }

 private:
  double threshold_;
  double cube_ = 0.0;
  std::optional<double> tripped_at_;
};

/// Produces one DiagnosticsRecord per sample time for one field series,
/// carrying the running X, Y and Z accumulators between calls.
class DiagnosticsTracker {
 public:
  DiagnosticsTracker(const SpectralGrid& grid, double gamma, double mu, double hs_probe_exponent,
                     double blowup_threshold = std::numeric_limits<double>::infinity());

  DiagnosticsRecord sample(double t, std::span<const cplx> u_hat, std::span<const cplx> ut_hat);
  const BlowupMonitor& monitor() const noexcept { return monitor_; }

 private:
  SpectralGrid grid_;
  EnergyEvaluator energy_;
  double lr_exponent_;
  RVector hs_weight_;
  RVector h1_weight_;
  RVector hs_symbol_;
  BlowupMonitor monitor_;
  CVector phys_;
  std::optional<double> prev_t_;
  double prev_lr_ = 0.0;
  // d = 5 accumulators
  double prev_l103_pow10_ = 0.0;
  double prev_l307_pow6_ = 0.0;
  double y_time_integral_ = 0.0;
  double z_time_integral_ = 0.0;
  double y_sup_ = 0.0;
  double z_sup_l103_ = 0.0;
  double z_sup_l5_ = 0.0;
};

// -- ensembles and fits ------------------------------------------------------

struct EnsembleSummary {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> means;
  std::map<std::string, std::vector<double>> variances;
  std::size_t count = 0;

  /// sqrt(variance / count) per time.
  std::vector<double> standard_error(const std::string& column) const;
};

/// Mean and unbiased variance per column and sample time, reduced in
/// trajectory order. Trajectories that stopped early truncate the table to
/// the common prefix of sample times.
EnsembleSummary summarize(std::span<const std::vector<DiagnosticsRecord>> trajectories);

struct DriftFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Weighted least-squares slope of mean E_total on [t0, t1], weights
/// 1/SE^2 (unweighted if any SE in the window is zero). The reported error
/// treats sample times as independent.
DriftFit ito_drift_fit(const EnsembleSummary& summary, double t0, double t1);

/// Same estimator; the error is taken from the spread of the per-trajectory
/// slopes, which accounts for the correlation of one path across times.
DriftFit ito_drift_fit(const EnsembleSummary& summary,
                       std::span<const std::vector<DiagnosticsRecord>> trajectories, double t0,
                       double t1);

struct TailPoint {
  double lambda;
  double log_survival;  // -inf when no sample exceeds lambda
  bool in_fit;
};

struct TailFit {
  std::vector<TailPoint> points;
  double c = 0.0;          // log P ~ intercept - c lambda^2
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Empirical survival at each lambda and a least-squares fit of log P
/// against -lambda^2 over lambdas between the 0.5 and 0.95 sample quantiles.
TailFit tail_estimate(std::span<const double> samples, std::span<const double> lambdas);

}  // namespace shnw
