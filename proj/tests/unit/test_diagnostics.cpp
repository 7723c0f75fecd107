#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "shnw/diagnostics.hpp"
#include "shnw/errors.hpp"
#include "shnw/verify.hpp"

using namespace shnw;
using namespace testutil;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

// Seeded corpus behind kInterpolationBound: 100 band-limited d = 5 fields.
std::vector<Field> interpolation_corpus() {
  const SpectralGrid g(5, 8, kTwoPi);
  std::vector<Field> out;
  for (int i = 0; i < 100; ++i) {
    RngStream rng(2024, static_cast<std::uint64_t>(i), Substream::corpus);
    out.push_back(band_limited(g, rng, 1 + i % 3, 0.5 * (i % 4)));
  }
  return out;
}

// least-squares c of log P against -lambda^2 for the exact |N(0,1)| tail
double gaussian_tail_c(const std::vector<double>& lambdas, double lo, double hi) {
  std::vector<double> x, y;
  for (double l : lambdas)
    if (l >= lo && l <= hi) {
      x.push_back(-l * l);
      y.push_back(std::log(std::erfc(l / std::numbers::sqrt2)));
    }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("energy examples") {
  const SpectralGrid g(2, 16, kTwoPi);
  const EnergyParts z = energy(WaveState::zeros(g), 1.0, 1.0);
  CHECK(z.total == 0.0);
  CHECK(z.potential == 0.0);

  // u = 0, ||ut|| = 2
  const double c = 2.0 / std::sqrt(g.box_volume());
  const WaveState s{Field::zeros(g, Representation::physical),
                    Field::from_function(g, [c](std::span<const double>) { return c; }), 0.0};
  CHECK(energy(s, 1.0, 1.0).total == doctest::Approx(2.0));
}

TEST_CASE("potential term against the double sum, signs and additivity") {
  const SpectralGrid g(2, 16, kTwoPi);
  const Field bump = Field::from_function(g, [](std::span<const double> x) {
    const double r2 = (x[0] - 3.0) * (x[0] - 3.0) + (x[1] - 2.5) * (x[1] - 2.5);
    return std::exp(-r2);
  });
  std::vector<double> u;
  for (const auto& z : bump.values()) u.push_back(z.real());
  const double ref = oracle::direct_potential_energy(g, 1.0, 1.0, u);
  const WaveState s{bump, Field::zeros(g, Representation::physical), 0.0};
  const EnergyParts e = energy(s, 1.0, 1.0);
  CHECK(std::abs(e.potential - ref) <= 1e-10 * std::abs(ref));
  CHECK(e.potential > 0.0);
  CHECK(energy(s, 1.0, -1.0).potential < 0.0);
  CHECK(e.total == doctest::Approx(e.kinetic + e.gradient + e.potential).epsilon(1e-12));
}

TEST_CASE("Strichartz and monitor exponents") {
  CHECK(strichartz_exponents(5).r == Rational{30, 7});
  CHECK(strichartz_exponents(6).r == Rational{18, 5});
  CHECK(strichartz_exponents(8).r == Rational{3, 1});
  CHECK(strichartz_exponents(5).q == Rational{3, 1});
  CHECK_THROWS_AS(strichartz_exponents(4), DomainError);
  CHECK(monitor_exponent(5) == doctest::Approx(30.0 / 7.0));
  CHECK(monitor_exponent(3) == doctest::Approx(18.0));
  CHECK(std::isinf(monitor_exponent(2)));
}

TEST_CASE("space-time norms") {
  const SpectralGrid g(2, 8, 3.0);
  RngStream rng(1, 0, Substream::test);
  const Field f = random_field(g, rng);
  std::vector<TimeSample> constant;
  for (int i = 0; i <= 4; ++i) constant.push_back({0.5 * i, f});
  const double T = 2.0;
  CHECK(spacetime_norm(constant, 3.0, 4.0) == doctest::Approx(std::pow(T, 1.0 / 3.0) * lebesgue_norm(f, 4.0)));

  std::vector<TimeSample> varying;
  for (int i = 0; i < 5; ++i) varying.push_back({0.3 * i, random_field(g, rng)});
  double best = 0.0;
  for (const auto& s : varying) best = std::max(best, lebesgue_norm(s.field, 2.0));
  CHECK(spacetime_norm(varying, kInf, 2.0) == doctest::Approx(best));
  CHECK(spacetime_norm(std::span(varying).first(1), kInf, 2.0) == doctest::Approx(lebesgue_norm(varying[0].field, 2.0)));
  CHECK_THROWS_AS(spacetime_norm(std::span(varying).first(1), 2.0, 2.0), DomainError);

  // q = r: flat L^r quadrature over space-time
  const double r = 3.0;
  double flat = 0.0;
  for (std::size_t i = 1; i < varying.size(); ++i) {
    double a = 0.0, b = 0.0;
    for (const auto& z : varying[i - 1].field.values()) a += std::pow(std::abs(z), r) * g.cell_volume();
    for (const auto& z : varying[i].field.values()) b += std::pow(std::abs(z), r) * g.cell_volume();
    flat += 0.5 * (varying[i].t - varying[i - 1].t) * (a + b);
  }
  CHECK(std::abs(spacetime_norm(varying, r, r) - std::pow(flat, 1.0 / r)) <= 1e-12 * std::pow(flat, 1.0 / r));
}

TEST_CASE("Y and Z norms") {
  const SpectralGrid g(5, 4, kTwoPi);
  std::vector<TimeSample> zero{{0.0, Field::zeros(g, Representation::physical)},
                               {1.0, Field::zeros(g, Representation::physical)}};
  const YZNorms z = yz_norms(zero, 0.74);
  CHECK(z.Y == 0.0);
  CHECK(z.Z == 0.0);

  RngStream rng(2, 0, Substream::test);
  const Field f = random_field(g, rng);
  const double T = 0.6;
  std::vector<TimeSample> constant{{0.0, f}, {0.2, f}, {T, f}};
  const Field smooth = apply_multiplier(f, sobolev_multiplier(0.74, SobolevFlavor::inhomogeneous));
  const YZNorms c = yz_norms(constant, 0.74);
  CHECK(c.Y == doctest::Approx(T * std::pow(lebesgue_norm(f, 10.0 / 3.0), 10) + lebesgue_norm(smooth, 5.0)).epsilon(1e-12));

  std::vector<TimeSample> smoothed;
  for (const auto& s : constant) smoothed.push_back({s.t, smooth});
  const double y = std::pow(spacetime_norm(constant, 10.0, 10.0 / 3.0), 10) + spacetime_norm(smoothed, kInf, 5.0);
  const double zz = std::pow(spacetime_norm(constant, 6.0, 30.0 / 7.0), 6) +
                    std::pow(spacetime_norm(constant, kInf, 10.0 / 3.0), 10) +
                    std::pow(spacetime_norm(constant, kInf, 5.0), 2);
  CHECK(std::abs(c.Y - y) <= 1e-12 * y);
  CHECK(std::abs(c.Z - zz) <= 1e-12 * zz);

  const SpectralGrid g3(3, 4, kTwoPi);
  std::vector<TimeSample> wrong{{0.0, Field::zeros(g3, Representation::physical)}};
  CHECK_THROWS_AS(yz_norms(wrong, 0.74), DomainError);
}

TEST_CASE("interpolation inequality with the frozen constant") {
  const SpectralGrid g(5, 8, kTwoPi);
  const auto [l0, r0] = interpolation_check(Field::zeros(g, Representation::physical));
  CHECK(l0 == 0.0);
  CHECK(r0 == 0.0);

  // single mode cos(x_1): |xi| = 1, both sides closed form
  const Field mode = Field::from_function(g, [](std::span<const double> x) { return std::cos(x[0]); });
  const auto [lm, rm] = interpolation_check(mode);
  CHECK(rm == doctest::Approx(std::pow(lebesgue_norm(mode, 2.0), 0.2) * std::pow(lebesgue_norm(mode, 4.0), 0.8)));
  CHECK(lm == doctest::Approx(lebesgue_norm(mode, 10.0 / 3.0)));
  CHECK(std::isfinite(lm / rm));

  double worst = 0.0;
  for (const Field& v : interpolation_corpus()) {
    const auto [lhs, rhs] = interpolation_check(v);
    worst = std::max(worst, lhs / rhs);
    CHECK(lhs <= kInterpolationBound * rhs);
  }
  MESSAGE("largest lhs/rhs on the corpus: " << worst);

  CHECK_THROWS_AS(interpolation_check(Field::zeros(SpectralGrid(3, 8, kTwoPi), Representation::physical)), DomainError);
}

TEST_CASE("blow-up monitor trips at the first crossing") {
  const double dt = 0.01;
  // unit norm: X(t) = t^{1/3}; threshold between steps 6 and 7
  BlowupMonitor m(std::cbrt(6.5 * dt));
  double prev = 0.0;
  for (int n = 1; n <= 12; ++n) {
    m.accumulate((n - 1) * dt, n * dt, 1.0);
    CHECK(m.value() >= prev);
    prev = m.value();
    CHECK(m.tripped() == (n >= 7));
  }
  REQUIRE(m.tripped_at());
  CHECK(*m.tripped_at() == doctest::Approx(7 * dt));
  CHECK_THROWS_AS(BlowupMonitor(0.0), ConfigError);
}

TEST_CASE("record statuses") {
  for (auto s : {RecordStatus::ok, RecordStatus::completed, RecordStatus::blowup, RecordStatus::failed})
    CHECK(parse_status(to_string(s)) == s);
  CHECK_THROWS(parse_status("done"));
}

TEST_CASE("tracker leaves Y and Z empty off d = 5") {
  const SpectralGrid g(3, 8, kTwoPi);
  DiagnosticsTracker t(g, 1.0, 1.0, 0.74);
  const Field z = Field::zeros(g, Representation::fourier);
  const DiagnosticsRecord r = t.sample(0.0, z.values(), z.values());
  CHECK(std::isnan(r.Y_probe));
  CHECK(std::isnan(r.Z_probe));

  const SpectralGrid g5(5, 4, kTwoPi);
  DiagnosticsTracker t5(g5, 4.0, 1.0, 0.74);
  RngStream rng(3, 0, Substream::test);
  const Field f = to_fourier(random_field(g5, rng));
  const Field fz = Field::zeros(g5, Representation::fourier);
  t5.sample(0.0, f.values(), fz.values());
  const DiagnosticsRecord r5 = t5.sample(0.5, f.values(), fz.values());
  std::vector<TimeSample> s{{0.0, f}, {0.5, f}};
  const YZNorms yz = yz_norms(s, 0.74);
  CHECK(r5.Y_probe == doctest::Approx(yz.Y).epsilon(1e-12));
  CHECK(r5.Z_probe == doctest::Approx(yz.Z).epsilon(1e-12));
}

TEST_CASE("ensemble summary") {
  std::vector<std::vector<DiagnosticsRecord>> paths(3);
  for (int p = 0; p < 3; ++p)
    for (int i = 0; i < 4 - (p == 2); ++i) {
      DiagnosticsRecord r;
      r.t = i;
      r.E_total = p + i;
      paths[p].push_back(r);
    }
  const EnsembleSummary s = summarize(paths);
  CHECK(s.count == 3);
  CHECK(s.times.size() == 3);
  CHECK(s.means.at("E_total")[1] == doctest::Approx(2.0));
  CHECK(s.variances.at("E_total")[1] == doctest::Approx(1.0));
  CHECK(s.standard_error("E_total")[1] == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(s.variances.at("L2")[0] == 0.0);
  CHECK_THROWS_AS(s.standard_error("nope"), DomainError);
}

TEST_CASE("Ito drift fit") {
  const double sigma2 = 3.0;
  std::vector<std::vector<DiagnosticsRecord>> paths(4);
  for (int p = 0; p < 4; ++p)
    for (int i = 0; i <= 10; ++i) {
      DiagnosticsRecord r;
      r.t = 0.1 * i;
      r.E_total = 0.5 * sigma2 * r.t + (p - 1.5) * 0.01 * r.t;
      paths[p].push_back(r);
    }
  const EnsembleSummary s = summarize(paths);
  const DriftFit f = ito_drift_fit(s, 0.1, 1.0);
  CHECK(std::abs(f.slope - 0.5 * sigma2) <= 1e-12);
  const DriftFit fp = ito_drift_fit(s, paths, 0.1, 1.0);
  CHECK(std::abs(fp.slope - 0.5 * sigma2) <= 1e-12);
  CHECK(fp.std_error > 0.0);

  std::vector<std::vector<DiagnosticsRecord>> flat(2, std::vector<DiagnosticsRecord>(6));
  for (auto& p : flat)
    for (int i = 0; i < 6; ++i) p[i].t = i, p[i].E_total = 4.0;
  CHECK(ito_drift_fit(summarize(flat), 0.0, 5.0).slope == doctest::Approx(0.0));

  CHECK_THROWS_AS(ito_drift_fit(s, 0.1, 0.3), DomainError);
  CHECK_THROWS_AS(ito_drift_fit(summarize(std::span(paths).first(1)), 0.0, 1.0), DomainError);
}

TEST_CASE("Gaussian tail fit") {
  RngStream rng(5, 0, Substream::test);
  std::vector<double> z(100000);
  for (auto& x : z) x = std::abs(rng.normal());
  std::vector<double> lambdas;
  for (int i = 0; i <= 40; ++i) lambdas.push_back(0.1 * i);
  const TailFit fit = tail_estimate(z, lambdas);
  // compare with the same fit on the exact survival function
  std::vector<double> sorted = z;
  std::sort(sorted.begin(), sorted.end());
  const double q50 = sorted[static_cast<std::size_t>(0.5 * (z.size() - 1))];
  const double q95 = sorted[static_cast<std::size_t>(0.95 * (z.size() - 1))];
  const double exact = gaussian_tail_c(lambdas, q50, q95);
  CHECK(fit.c == doctest::Approx(exact).epsilon(0.1));
  CHECK(fit.r2 > 0.99);

  std::vector<double> same(200, 1.5);
  CHECK_THROWS_AS(tail_estimate(same, lambdas), DomainError);
  CHECK_THROWS_AS(tail_estimate(std::span(z).first(50), lambdas), DomainError);

  std::vector<double> big = lambdas;
  big.push_back(1e3);
  const TailFit b = tail_estimate(z, big);
  CHECK(std::isinf(b.points.back().log_survival));
  CHECK_FALSE(b.points.back().in_fit);
  CHECK(b.c == doctest::Approx(fit.c));
}

}
