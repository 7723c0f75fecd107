#pragma once

// Independent reference computations and the invariant suites run by
// `shnw verify` and the acceptance binary. The oracles deliberately avoid the
// FFT, the multiplier tables and the closed forms they are used to check.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "shnw/spectral.hpp"
#include "shnw/stochastic.hpp"

namespace shnw::oracle {

/// pi^{d/2} 2^{d-gamma} Gamma((d-gamma)/2) / Gamma(gamma/2), from std::tgamma.
double riesz_constant(int d, double gamma);

/// Periodized kernel V(x_j) = L^{-d} sum_k m(xi_k) exp(i xi_k . x_j) for every
/// lattice offset j, by explicit cosine sums. m is mu c |xi|^{gamma-d} with
/// the zero mode mu h_x sum_{j != 0} |x_j|^{-gamma} over minimum images.
std::vector<double> periodic_kernel(const SpectralGrid& grid, double gamma, double mu);

/// (V * f)(x_i) = sum_j V(x_i - x_j) f(x_j) h_x.
std::vector<double> direct_convolution(const SpectralGrid& grid, const std::vector<double>& kernel,
                                       const std::vector<double>& f);

/// (1/4) sum_i u_i^2 (V * u^2)(x_i) h_x.
double direct_potential_energy(const SpectralGrid& grid, double gamma, double mu,
                               const std::vector<double>& u);

/// (V * u^2) u pointwise.
std::vector<double> direct_hartree(const SpectralGrid& grid, double gamma, double mu,
                                   const std::vector<double>& u);

/// Adaptive Gauss-Kronrod values of the step covariance integrals.
struct Covariance {
  double a, b, c;
};
Covariance quadrature_covariance(double omega, double h);

/// Covariance after two steps of length h/2: S Sigma S^T + Sigma.
Covariance compose_half_steps(double omega, const Covariance& half, double h);

/// sum over all integer n of prod_i cos^2(pi (xi_i - n_i) / 2) on |xi_i - n_i| < 1.
double partition_sum(const std::array<double, kMaxDim>& xi, int dim);
/// sum_k |u_k|^2 sum_n psi(xi_k - n)^2: the mean of ||u^omega||_2^2 under
/// unit-variance complex Gaussian coefficients.
double expected_randomized_l2(const Field& u);

/// Per-mode free wave flow from the explicit formulas.
std::pair<cplx, cplx> wave_mode(double omega, cplx u, cplx ut, double t);

}  // namespace shnw::oracle

namespace shnw::verify {

enum class Level { quick, full };

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Check {
  int id;
  std::string name;
  std::function<CheckResult(Level)> run;
};

/// The ten acceptance checks in order. `quick` shrinks ensembles and grids
/// where the check allows it.
const std::vector<Check>& acceptance_checks();

/// Runs the checks (all when `only` is empty), printing one line each via
/// `sink` as they finish. Exceptions inside a check count as a failure.
std::vector<CheckResult> run_checks(Level level, const std::vector<int>& only = {},
                                    const std::function<void(const CheckResult&)>& sink = {});

std::string format_line(const CheckResult& r);

}  // namespace shnw::verify
