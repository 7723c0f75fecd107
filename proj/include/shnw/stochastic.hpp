#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "shnw/linwave.hpp"
#include "shnw/spectral.hpp"

namespace shnw {

// -- random streams ----------------------------------------------------------

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

enum class Substream : std::uint64_t { noise = 1, randomize = 2, corpus = 3, test = 99 };

/// Counter-based stream keyed by (master_seed, substream label); the
/// trajectory index occupies the upper counter words. The same derivation
/// always yields the same sequence, independent of threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t trajectory, std::uint64_t label);
  RngStream(std::uint64_t master_seed, std::uint64_t trajectory, Substream label)
      : RngStream(master_seed, trajectory, static_cast<std::uint64_t>(label)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  double normal() { return normal_(*this); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// +1 or -1 with equal probability.
  int sign() { return ((*this)() >> 63) != 0 ? 1 : -1; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::uint64_t trajectory_;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::normal_distribution<double> normal_;
};

// -- noise operator ----------------------------------------------------------

/// phi acting diagonally on Fourier modes, identically zero for |xi| > cutoff.
struct NoiseModel {
  FourierMultiplier multiplier = FourierMultiplier::radial([](double) { return 0.0; }, 0.0);
  double cutoff = 0.0;
  std::uint64_t master_seed = 0;

  static NoiseModel off();
  /// amplitude on |xi| <= cutoff.
  static NoiseModel flat(double amplitude, double cutoff, std::uint64_t seed = 0);
  /// amplitude * <xi>^{-s} on |xi| <= cutoff.
  static NoiseModel sobolev(double amplitude, double s, double cutoff, std::uint64_t seed = 0);

  /// Symbol on the lattice with the cutoff applied.
  MultiplierTable table(const SpectralGrid& grid) const;
};

/// ||phi||_{HS(L^2; H^s)} = sqrt(sum_k <xi_k>^{2s} |m(xi_k)|^2).
double hs_norm(const NoiseModel& noise, const SpectralGrid& grid, double s);

/// Per-mode covariance of the Ito integrals over one step h:
///   a = int_0^h sin^2(w s)/w^2 ds,  b = int_0^h cos^2(w s) ds,
///   c = int_0^h sin(w s) cos(w s)/w ds.
struct StepNoiseCovariance {
  double a;
  double b;
  double c;
  double omega;
  double h;
};

StepNoiseCovariance step_covariance(double omega, double h);

/// Samples the exact Gaussian increment of (Psi, dPsi/dt) over a fixed step,
/// optionally filtered by an extra real multiplier (e.g. P_{<=N}).
class ConvolutionStepper {
 public:
  ConvolutionStepper(const SpectralGrid& grid, const NoiseModel& noise, double h,
                     const MultiplierTable* filter = nullptr);

  bool active() const noexcept { return !modes_.empty(); }
  /// Adds one independent increment to Fourier coefficients.
  void add_increment(RngStream& rng, std::span<cplx> u_hat, std::span<cplx> ut_hat) const;

 private:
  struct Mode {
    std::uint32_t k;
    std::uint32_t partner;
    double l11, l21, l22;  // Cholesky factor of [[a, c], [c, b]]
    cplx m;
  };
  std::vector<Mode> modes_;
};

/// Psi(t + h) given Psi(t): exact flow plus an exact-in-law increment.
WaveState advance_convolution(const WaveState& psi, const NoiseModel& noise, double h,
                              RngStream& rng);

// -- Wiener randomization ----------------------------------------------------

enum class Window { raised_cosine };
enum class CoefficientLaw { gaussian, bernoulli };

struct RandomizationSpec {
  Window window = Window::raised_cosine;
  CoefficientLaw law = CoefficientLaw::gaussian;
  std::uint64_t seed = 0;
};

/// cos^2(pi x / 2) on |x| < 1, zero outside.
double window_1d(double x);
/// Tensor product of window_1d.
double window(std::span<const double> xi);
/// max over the lattice of |sum_n psi(xi - n) - 1|.
double partition_defect(const SpectralGrid& grid);

/// Random coefficients g_n on the cube box [-R, R]^d, with g_{-n} = conj(g_n)
/// and g_0 real.
class CubeCoefficients {
 public:
  CubeCoefficients(int dim, int radius);

  static CubeCoefficients ones(int dim, int radius);
  /// Unit variance: gaussian draws (X + iY)/sqrt(2) (g_0 ~ N(0,1)), bernoulli
  /// draws real +-1.
  static CubeCoefficients draw(int dim, int radius, CoefficientLaw law, RngStream& rng);

  int dim() const noexcept { return dim_; }
  int radius() const noexcept { return radius_; }
  cplx at(const LatticeIndex& n) const;
  void set(const LatticeIndex& n, cplx value);

 private:
  std::size_t offset(const LatticeIndex& n) const;
  int dim_;
  int radius_;
  std::vector<cplx> values_;
};

/// Smallest R such that every cube touching a lattice frequency lies in [-R, R]^d.
int cube_radius(const SpectralGrid& grid);

/// sum_n g_n psi(D - n) u. Throws ConfigError when L < 2 pi (cubes would not
/// resolve the lattice).
Field randomize_with(const Field& u, const CubeCoefficients& g);

std::pair<Field, Field> wiener_randomize(const Field& u0, const Field& u1,
                                         const RandomizationSpec& spec, RngStream& rng);

}  // namespace shnw
