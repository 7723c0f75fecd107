#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "shnw/diagnostics.hpp"
#include "shnw/dynamics.hpp"
#include "shnw/errors.hpp"
#include "shnw/io.hpp"
#include "shnw/verify.hpp"

namespace shnw::verify {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Real field whose Fourier support is |k_i| <= kmax (lattice units), with
// coefficients ~ amplitude <k>^{-decay} and random phases.
Field band_limited(const SpectralGrid& grid, RngStream& rng, int kmax, double amplitude,
                   double decay) {
  CVector c(grid.size(), cplx(0.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const LatticeIndex k = grid.lattice_index(i);
    bool inside = true;
    double k2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      inside = inside && std::abs(k[a]) <= kmax && 2 * std::abs(k[a]) < grid.points();
      k2 += double(k[a]) * k[a];
    }
    const double re = rng.normal(), im = rng.normal();
    if (inside) c[i] = amplitude * std::pow(1.0 + k2, -0.5 * decay) * cplx(re, im);
  }
  // real part of the synthesized field = Hermitian symmetrization
  Field f(grid, Representation::fourier, std::move(c), false);
  Field p = to_physical(f);
  for (auto& z : p.values()) z = cplx(z.real(), 0.0);
  p.set_real(true);
  return to_fourier(p);
}

double energy_norm_sq(const SpectralGrid& grid, std::span<const cplx> u, std::span<const cplx> ut) {
  const auto w = grid.abs_frequency();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * w[i] * std::norm(u[i]) + std::norm(ut[i]);
  return s;
}

// sqrt(||grad du||^2 + ||du_t||^2)
double energy_distance(const WaveState& a, const WaveState& b) {
  const Field au = to_fourier(a.u), aut = to_fourier(a.ut);
  const Field bu = to_fourier(b.u), but = to_fourier(b.ut);
  CVector du(au.values().begin(), au.values().end());
  CVector dut(aut.values().begin(), aut.values().end());
  for (std::size_t i = 0; i < du.size(); ++i) {
    du[i] -= bu.values()[i];
    dut[i] -= but.values()[i];
  }
  return std::sqrt(energy_norm_sq(a.u.grid(), du, dut));
}

// -- 1 ----------------------------------------------------------------------

CheckResult ito_energy_law(Level level) {
  SimConfig cfg;
  cfg.d = 3;
  cfg.M = 16;
  cfg.gamma = 1.0;
  cfg.mu = 0.0;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.sample_every = 50;
  cfg.noise.amplitude = 1.0;
  cfg.noise.cutoff = 3.0;
  cfg.trajectories = level == Level::full ? 512 : 128;
  cfg.master_seed = 20240611;
  const double hs = hs_norm(cfg.noise.model(cfg.master_seed), cfg.grid(), 0.0);
  const double target = 0.5 * hs * hs;

  const EnsembleResult res = simulate_ensemble(cfg, 0);
  std::vector<std::vector<DiagnosticsRecord>> paths;
  for (const auto& r : res.records) paths.push_back(r.u);
  const auto& s = res.summary;
  const DriftFit fit = ito_drift_fit(s, paths, s.times[1], s.times.back());
  const DriftFit naive = ito_drift_fit(s, s.times[1], s.times.back());
  const double z = (fit.slope - target) / fit.std_error;
  CheckResult r;
  r.pass = std::abs(z) <= 3.0 && res.failed == 0;
  r.detail = fmt("slope %.5f target %.5f stderr %.5f (|z| = %.2f, %d paths; times-independent stderr %.5f)",
                 fit.slope, target, fit.std_error, std::abs(z), cfg.trajectories, naive.std_error);
  return r;
}

// -- 2 ----------------------------------------------------------------------

double relative_energy_drift(const SimConfig& cfg, const WaveState& init, double* pot_fraction) {
  const TrajectoryRecord rec = run_trajectory(cfg, 0, init);
  const double e0 = rec.u.front().E_total;
  double worst = 0.0;
  for (const auto& row : rec.u) worst = std::max(worst, std::abs(row.E_total - e0) / std::abs(e0));
  if (pot_fraction) *pot_fraction = rec.u.front().E_pot / e0;
  if (rec.status != RecordStatus::completed) return std::numeric_limits<double>::infinity();
  return worst;
}

CheckResult energy_conservation(Level level) {
  RngStream rng(7, 0, Substream::test);
  SimConfig c3;
  c3.d = 3;
  c3.M = level == Level::full ? 32 : 16;
  c3.gamma = 1.0;
  c3.mu = 1.0;
  c3.dt = 1e-3;
  c3.t_final = level == Level::full ? 1.0 : 0.25;
  c3.sample_every = 10;
  const SpectralGrid g3 = c3.grid();
  const WaveState s3{band_limited(g3, rng, 3, 0.4, 1.0), band_limited(g3, rng, 3, 0.4, 1.0), 0.0};

  SimConfig c5 = c3;
  c5.d = 5;
  c5.M = 8;
  c5.gamma = 4.0;
  c5.t_final = level == Level::full ? 1.0 : 0.1;
  const SpectralGrid g5 = c5.grid();
  const WaveState s5{band_limited(g5, rng, 2, 0.15, 1.0), band_limited(g5, rng, 2, 0.15, 1.0), 0.0};

  double f3 = 0.0, f5 = 0.0;
  const double d3 = relative_energy_drift(c3, s3, &f3);
  const double d5 = relative_energy_drift(c5, s5, &f5);
  CheckResult r;
  r.pass = d3 <= 1e-6 && d5 <= 1e-6;
  r.detail = fmt("d=3 M=%d drift %.2e (E_pot/E %.3f); d=5 M=8 drift %.2e (E_pot/E %.3f); t in [0, %g]",
                 c3.M, d3, f3, d5, f5, c3.t_final);
  return r;
}

// -- 3 ----------------------------------------------------------------------

CheckResult riesz_identity(Level) {
  double worst = 0.0;
  int grids = 0;
  std::string where;
  RngStream rng(11, 0, Substream::test);
  for (int d = 1; d <= 5; ++d) {
    for (int m = 4; std::pow(double(m), d) <= 4096.0; m *= 2) {
      const double L = grids % 2 == 0 ? kTwoPi : 3.7;
      const double gamma = d == 1 ? 0.5 : (grids % 2 == 0 ? 0.5 * d : d - 0.75);
      const double mu = grids % 3 == 0 ? -1.0 : 1.0;
      const SpectralGrid g(d, m, L);
      std::vector<double> u(g.size()), sq(g.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = 2.0 * rng.uniform() - 1.0;
        sq[i] = u[i] * u[i];
      }
      const auto kernel = oracle::periodic_kernel(g, gamma, mu);
      const auto conv = oracle::direct_convolution(g, kernel, sq);
      double pot_ref = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) pot_ref += 0.25 * sq[i] * conv[i] * g.cell_volume();

      const Field uf = Field::from_real(g, u);
      const Field usq = Field::from_real(g, sq);
      const Field fast = riesz_convolve(usq, gamma, mu);
      double scale = 0.0, diff = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        scale = std::max(scale, std::abs(conv[i]));
        diff = std::max(diff, std::abs(fast.values()[i].real() - conv[i]));
      }
      CVector phys(uf.values().begin(), uf.values().end());
      const double pot = EnergyEvaluator(g, gamma, mu).potential(phys);
      const double err = std::max(diff / scale, std::abs(pot - pot_ref) / std::abs(pot_ref));
      if (err > worst) {
        worst = err;
        where = fmt("d=%d M=%d gamma=%g", d, m, gamma);
      }
      ++grids;
    }
  }
  CheckResult r;
  r.pass = worst <= 1e-10;
  r.detail = fmt("%d grids, worst relative error %.2e (%s)", grids, worst, where.c_str());
  return r;
}

// -- 4 ----------------------------------------------------------------------

CheckResult propagator_exactness(Level) {
  RngStream rng(13, 0, Substream::test);
  double closed = 0.0, group = 0.0, reversal = 0.0, energy = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const SpectralGrid g(d, d == 3 ? 8 : 16, trial % 2 ? kTwoPi : 5.3);
    std::vector<double> a(g.size()), b(g.size());
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const WaveState s{to_fourier(Field::from_real(g, a)), to_fourier(Field::from_real(g, b)), 0.0};
    const double t1 = 4.0 * rng.uniform() - 2.0;
    const double t2 = 4.0 * rng.uniform() - 2.0;
    const double norm = std::sqrt(energy_norm_sq(g, s.u.values(), s.ut.values()) +
                                  std::norm(s.u.values()[0]));

    const WaveState p1 = propagate(s, t1);
    double dc = 0.0;
    const auto w = g.abs_frequency();
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto [u, ut] = oracle::wave_mode(w[k], s.u.values()[k], s.ut.values()[k], t1);
      dc += (1.0 + w[k] * w[k]) * std::norm(u - p1.u.values()[k]) + std::norm(ut - p1.ut.values()[k]);
    }
    closed = std::max(closed, std::sqrt(dc) / norm);

    const WaveState p12 = propagate(p1, t2);
    const WaveState p_sum = propagate(s, t1 + t2);
    group = std::max(group, (energy_distance(p12, p_sum) +
                             std::abs(p12.u.values()[0] - p_sum.u.values()[0])) / norm);

    const WaveState back = propagate(p1, -t1);
    reversal = std::max(reversal, (energy_distance(back, s) +
                                   std::abs(back.u.values()[0] - s.u.values()[0])) / norm);

    const double e0 = linear_energy(s);
    energy = std::max(energy, std::abs(linear_energy(p1) - e0) / e0);
  }
  CheckResult r;
  r.pass = closed <= 1e-12 && group <= 1e-12 && reversal <= 1e-12 && energy <= 1e-12;
  r.detail = fmt("100 states: closed form %.1e, group law %.1e, reversal %.1e, energy %.1e", closed,
                 group, reversal, energy);
  return r;
}

// -- 5 ----------------------------------------------------------------------

CheckResult randomization_partition(Level level) {
  double defect = 0.0, oracle_defect = 0.0;
  for (const double L : {kTwoPi, 2.0 * kTwoPi, 7.0}) {
    const SpectralGrid g(3, 16, L);
    defect = std::max(defect, partition_defect(g));
    for (std::size_t i = 0; i < g.size(); ++i)
      oracle_defect = std::max(oracle_defect, std::abs(oracle::partition_sum(g.frequency(i), 3) - 1.0));
  }

  const SpectralGrid g(3, 16, kTwoPi);
  RngStream rng(17, 0, Substream::test);
  const Field u0 = band_limited(g, rng, 5, 1.0, 1.5);
  const int radius = cube_radius(g);
  const Field same = randomize_with(u0, CubeCoefficients::ones(3, radius));
  double ones = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    ones = std::max(ones, std::abs(same.values()[i] - u0.values()[i]));
    scale = std::max(scale, std::abs(u0.values()[i]));
  }
  ones /= scale;

  const int draws = level == Level::full ? 4096 : 1024;
  double sum = 0.0, sum_sq = 0.0;
  for (int n = 0; n < draws; ++n) {
    RngStream r(23, static_cast<std::uint64_t>(n), Substream::randomize);
    const Field uw = randomize_with(u0, CubeCoefficients::draw(3, radius, CoefficientLaw::gaussian, r));
    const double l2 = sobolev_norm(uw, 0.0, SobolevFlavor::inhomogeneous);
    sum += l2 * l2;
    sum_sq += l2 * l2 * l2 * l2;
  }
  const double mean = sum / draws;
  const double var = (sum_sq - draws * mean * mean) / (draws - 1);
  const double se = std::sqrt(var / draws);
  const double expected = oracle::expected_randomized_l2(u0);
  const double z = (mean - expected) / se;

  CheckResult r;
  r.pass = defect <= 1e-12 && oracle_defect <= 1e-12 && ones <= 1e-12 && std::abs(z) <= 3.0;
  r.detail = fmt("partition defect %.1e (oracle %.1e), all-ones %.1e, MC mean %.5f vs %.5f (|z| = %.2f, %d draws)",
                 defect, oracle_defect, ones, mean, expected, std::abs(z), draws);
  return r;
}

// -- 6 ----------------------------------------------------------------------

CheckResult exponent_table(Level) {
  const ExponentPair e5 = strichartz_exponents(5);
  const ExponentPair e6 = strichartz_exponents(6);
  CheckResult r;
  r.pass = e5.q == Rational{3, 1} && e5.r == Rational{30, 7} && e6.q == Rational{3, 1} &&
           e6.r == Rational{18, 5};
  r.detail = fmt("d=5: q=%ld/%ld r=%ld/%ld; d=6: q=%ld/%ld r=%ld/%ld", e5.q.num, e5.q.den, e5.r.num,
                 e5.r.den, e6.q.num, e6.q.den, e6.r.num, e6.r.den);
  return r;
}

// -- 7 ----------------------------------------------------------------------

CheckResult strichartz_tail(Level level) {
  const SpectralGrid g(5, 8, kTwoPi);
  RngStream rng(29, 0, Substream::test);
  const Field u0 = band_limited(g, rng, 3, 1.0, 2.0);
  const Field u1 = band_limited(g, rng, 3, 1.0, 2.0);
  const ExponentPair ex = strichartz_exponents(5);
  const int draws = level == Level::full ? 2048 : 256;
  const int nt = 11;

  std::vector<double> times(nt);
  std::vector<Propagator> props;
  for (int j = 0; j < nt; ++j) {
    times[j] = double(j) / (nt - 1);
    props.emplace_back(g, times[j]);
  }
  RandomizationSpec spec;
  std::vector<double> samples;
  samples.reserve(draws);
  CVector u(g.size()), ut(g.size());
  std::vector<double> values(nt);
  for (int n = 0; n < draws; ++n) {
    RngStream r(31, static_cast<std::uint64_t>(n), Substream::randomize);
    const auto [a, b] = wiener_randomize(u0, u1, spec, r);
    const Field fa = to_fourier(a), fb = to_fourier(b);
    for (int j = 0; j < nt; ++j) {
      std::copy(fa.values().begin(), fa.values().end(), u.begin());
      std::copy(fb.values().begin(), fb.values().end(), ut.begin());
      props[j].advance(u, ut);
      fft::inverse(g, u);
      for (auto& z : u) z = cplx(z.real(), 0.0);
      values[j] = lebesgue_norm(u, ex.r.value(), g.cell_volume());
    }
    samples.push_back(time_norm(times, values, ex.q.value()));
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  std::vector<double> lambdas;
  for (int i = 0; i < 64; ++i) lambdas.push_back(*lo + (*hi - *lo) * i / 63.0);
  const TailFit fit = tail_estimate(samples, lambdas);
  int used = 0;
  for (const auto& p : fit.points) used += p.in_fit;

  CheckResult r;
  r.pass = fit.r2 >= 0.9;
  r.detail = fmt("%d draws, c = %.4g, R^2 = %.4f over %d lambdas", draws, fit.c, fit.r2, used);
  return r;
}

// -- 8 ----------------------------------------------------------------------

CheckResult integrator_convergence(Level) {
  SimConfig cfg;
  cfg.d = 3;
  cfg.M = 16;
  cfg.gamma = 1.0;
  cfg.mu = 1.0;
  cfg.t_final = 1.0;
  const SpectralGrid g = cfg.grid();
  RngStream rng(37, 0, Substream::test);
  const WaveState init{band_limited(g, rng, 2, 1.0, 1.0), band_limited(g, rng, 2, 1.0, 1.0), 0.0};

  std::vector<WaveState> finals;
  for (const double dt : {0.02, 0.01, 0.005}) {
    cfg.dt = dt;
    cfg.sample_every = static_cast<int>(std::lround(1.0 / dt));
    finals.push_back(*run_trajectory(cfg, 0, init).final_state);
  }
  const double e1 = energy_distance(finals[0], finals[1]);
  const double e2 = energy_distance(finals[1], finals[2]);
  const double ratio = e1 / e2;
  CheckResult r;
  r.pass = ratio >= 3.5 && ratio <= 4.5;
  r.detail = fmt("dt = 0.02/0.01/0.005: successive differences %.3e, %.3e, ratio %.3f", e1, e2, ratio);
  return r;
}

// -- 9 ----------------------------------------------------------------------

CheckResult truncation_convergence(Level level) {
  SimConfig cfg;
  cfg.d = 3;
  cfg.M = 16;
  cfg.gamma = 1.0;
  cfg.mu = 1.0;
  cfg.dt = level == Level::full ? 1e-3 : 4e-3;
  cfg.t_final = 1.0;
  cfg.sample_every = 10;
  const SpectralGrid g = cfg.grid();
  RngStream rng(41, 0, Substream::test);
  const WaveState init{band_limited(g, rng, 7, 1.5, 1.5), band_limited(g, rng, 7, 1.5, 0.5), 0.0};

  const auto collect = [&](std::optional<double> n) {
    SimConfig c = cfg;
    c.truncation_N = n;
    std::vector<WaveState> states;
    run_trajectory(c, 0, init, [&](std::size_t, const WaveState& s) { states.push_back(s); });
    return states;
  };
  const auto full = collect(std::nullopt);
  std::vector<double> dist;
  for (const double n : {2.0, 4.0, 8.0}) {
    const auto trunc = collect(n);
    double sup = 0.0;
    for (std::size_t i = 0; i < std::min(full.size(), trunc.size()); ++i)
      sup = std::max(sup, energy_distance(full[i], trunc[i]));
    dist.push_back(sup);
  }
  CheckResult r;
  r.pass = dist[1] < dist[0] && dist[2] < dist[1];
  r.detail = fmt("sup_t distance N=2: %.3e, N=4: %.3e, N=8: %.3e (ratios %.3f, %.3f)", dist[0],
                 dist[1], dist[2], dist[1] / dist[0], dist[2] / dist[1]);
  return r;
}

// -- 10 ---------------------------------------------------------------------

CheckResult covariance_correctness(Level level) {
  const int points = level == Level::full ? 161 : 41;
  double quad = 0.0, markov = 0.0;
  std::string where;
  for (const double h : {1e-3, 0.37, 1.0}) {
    for (int i = 0; i < points; ++i) {
      const double x = std::pow(10.0, -6.0 + 8.0 * i / (points - 1));  // omega h
      const double omega = x / h;
      const StepNoiseCovariance s = step_covariance(omega, h);
      const oracle::Covariance q = oracle::quadrature_covariance(omega, h);
      const double scale_c = std::sqrt(q.a * q.b);
      const double e = std::max({std::abs(s.a - q.a) / q.a, std::abs(s.b - q.b) / q.b,
                                 std::abs(s.c - q.c) / scale_c});
      if (e > quad) {
        quad = e;
        where = fmt("omega h = %.3g, h = %g", x, h);
      }
      const StepNoiseCovariance half = step_covariance(omega, 0.5 * h);
      const oracle::Covariance comp = oracle::compose_half_steps(omega, {half.a, half.b, half.c}, h);
      markov = std::max({markov, std::abs(comp.a - s.a) / s.a, std::abs(comp.b - s.b) / s.b,
                         std::abs(comp.c - s.c) / std::sqrt(s.a * s.b)});
    }
    const StepNoiseCovariance z = step_covariance(0.0, h);
    const oracle::Covariance qz = oracle::quadrature_covariance(0.0, h);
    quad = std::max({quad, std::abs(z.a - qz.a) / qz.a, std::abs(z.b - qz.b) / qz.b,
                     std::abs(z.c - qz.c) / std::sqrt(qz.a * qz.b)});
  }
  CheckResult r;
  r.pass = quad <= 1e-10 && markov <= 1e-12;
  r.detail = fmt("quadrature %.1e (worst at %s), two half steps %.1e", quad, where.c_str(), markov);
  return r;
}

}  // namespace

const std::vector<Check>& acceptance_checks() {
  static const std::vector<Check> checks{
      {1, "linear Ito energy law", ito_energy_law},
      {2, "deterministic energy conservation", energy_conservation},
      {3, "Riesz potential identity", riesz_identity},
      {4, "propagator exactness", propagator_exactness},
      {5, "randomization partition of unity", randomization_partition},
      {6, "Strichartz exponent table", exponent_table},
      {7, "probabilistic Strichartz tail", strichartz_tail},
      {8, "integrator convergence", integrator_convergence},
      {9, "truncation convergence", truncation_convergence},
      {10, "covariance correctness", covariance_correctness},
  };
  return checks;
}

std::vector<CheckResult> run_checks(Level level, const std::vector<int>& only,
                                    const std::function<void(const CheckResult&)>& sink) {
  std::vector<CheckResult> out;
  for (const Check& c : acceptance_checks()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c.run(level);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sink) sink(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CheckResult& r) {
  return fmt("%s %2d  %-36s %s [%.1fs]", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
             r.detail.c_str(), r.seconds);
}

}  // namespace shnw::verify
