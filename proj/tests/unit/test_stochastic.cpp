#include <cmath>
#include <numbers>
#include <set>
#include <thread>

#include "doctest.h"
#include "helpers.hpp"
#include "shnw/errors.hpp"
#include "shnw/stochastic.hpp"
#include "shnw/verify.hpp"

using namespace shnw;
using namespace testutil;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_SUITE("stochastic") {

TEST_CASE("Philox4x32-10 known answers") {
  // Random123 reference vectors
  const auto a = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(a == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  const auto b = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  CHECK(b == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  const auto c = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  CHECK(c == std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 3, Substream::noise), b(42, 3, Substream::noise);
  RngStream c(42, 4, Substream::noise), d(42, 3, Substream::randomize), e(43, 3, Substream::noise);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    if (i == 0) {
      firsts = {x, c(), d(), e()};
      CHECK(firsts.size() == 4);
    }
  }

  // same stream from another thread gives the same values
  std::vector<double> here, there(100);
  RngStream s1(9, 1, Substream::noise);
  for (int i = 0; i < 100; ++i) here.push_back(s1.normal());
  std::thread t([&] {
    RngStream s2(9, 1, Substream::noise);
    for (auto& v : there) v = s2.normal();
  });
  t.join();
  CHECK(here == there);

  RngStream u(1, 0, Substream::test);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    mean += x / 20000;
  }
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("hs_norm examples") {
  const SpectralGrid g(2, 16, kTwoPi);
  const NoiseModel flat = NoiseModel::flat(1.0, 2.0);
  std::size_t inside = 0;
  for (double w : g.abs_frequency()) inside += w <= 2.0;
  CHECK(hs_norm(flat, g, 0.0) == doctest::Approx(std::sqrt(double(inside))));
  CHECK(hs_norm(NoiseModel::off(), g, 0.0) == 0.0);
  CHECK(hs_norm(NoiseModel::sobolev(1.0, 1.0, 3.0), g, 1.0) == doctest::Approx(std::sqrt(
                                                                   double(std::count_if(
                                                                       g.abs_frequency().begin(),
                                                                       g.abs_frequency().end(),
                                                                       [](double w) { return w <= 3.0; })))));
}

TEST_CASE("step_covariance examples") {
  const StepNoiseCovariance z = step_covariance(0.0, 1.0);
  CHECK(z.a == doctest::Approx(1.0 / 3.0));
  CHECK(z.b == doctest::Approx(1.0));
  CHECK(z.c == doctest::Approx(0.5));

  const StepNoiseCovariance one = step_covariance(1.0, 1.0);
  CHECK(one.a == doctest::Approx(0.272676).epsilon(1e-6));
  CHECK(one.b == doctest::Approx(0.727324).epsilon(1e-6));
  CHECK(one.c == doctest::Approx(0.354037).epsilon(1e-6));

  for (double w : {0.0, 1e-8, 1e-3, 0.5, 3.0, 40.0, 1e4})
    for (double h : {1e-3, 0.1, 1.0}) {
      const auto s = step_covariance(w, h);
      CHECK(s.a >= 0.0);
      CHECK(s.b >= 0.0);
      CHECK(s.c * s.c <= s.a * s.b * (1.0 + 1e-12));
    }

  // series branch meets the closed form at omega h = 1e-4
  const double h = 0.5;
  const auto lo = step_covariance(1e-4 / h * (1.0 - 1e-12), h);
  const auto hi = step_covariance(1e-4 / h * (1.0 + 1e-12), h);
  CHECK(std::abs(lo.a - hi.a) <= 1e-10 * hi.a);
  CHECK(std::abs(lo.b - hi.b) <= 1e-10 * hi.b);
  CHECK(std::abs(lo.c - hi.c) <= 1e-10 * hi.c);

  CHECK_THROWS_AS(step_covariance(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(step_covariance(1.0, -1.0), DomainError);
}

TEST_CASE("Markov consistency for n = 2 and 4 steps") {
  for (double w : {0.0, 0.3, 2.0, 17.0}) {
    const double h = 0.8;
    const auto whole = step_covariance(w, h);
    const auto q = step_covariance(w, h / 4);
    const auto halves = oracle::compose_half_steps(w, {q.a, q.b, q.c}, h / 2);
    const auto quarters = oracle::compose_half_steps(w, halves, h);
    CHECK(quarters.a == doctest::Approx(whole.a).epsilon(1e-12));
    CHECK(quarters.b == doctest::Approx(whole.b).epsilon(1e-12));
    CHECK(std::abs(quarters.c - whole.c) <= 1e-12 * std::sqrt(whole.a * whole.b));
  }
}

TEST_CASE("advance_convolution") {
  const SpectralGrid g(2, 8, kTwoPi);
  RngStream rng(5, 0, Substream::test);
  const WaveState s{random_field(g, rng), random_field(g, rng), 0.0};
  RngStream r(1, 0, Substream::noise);
  const WaveState out = advance_convolution(s, NoiseModel::off(), 0.3, r);
  const WaveState ref = propagate(s, 0.3);
  CHECK(max_diff(out.u.values(), ref.u.values()) == 0.0);
  CHECK_THROWS_AS(advance_convolution(s, NoiseModel::flat(1.0, 2.0), 0.0, r), DomainError);

  // the increment is Hermitian, so the physical field stays real
  const WaveState noisy = advance_convolution(WaveState::zeros(g), NoiseModel::flat(1.0, 10.0), 0.3, r);
  const Field p = to_physical(Field(g, Representation::fourier, noisy.u.storage(), false));
  for (const auto& z : p.values()) CHECK(std::abs(z.imag()) <= 1e-14);
}

TEST_CASE("one step from zero: Ito isometry") {
  const SpectralGrid g(2, 8, kTwoPi);
  const NoiseModel noise = NoiseModel::flat(0.7, 2.5);
  const double hs = hs_norm(noise, g, 0.0);
  const double h = 0.4;
  const int n = 4096;
  const ConvolutionStepper stepper(g, noise, h);
  const auto w = g.abs_frequency();
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    RngStream r(77, static_cast<std::uint64_t>(i), Substream::noise);
    CVector u(g.size()), ut(g.size());
    stepper.add_increment(r, u, ut);
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) e += std::norm(ut[k]) + w[k] * w[k] * std::norm(u[k]);
    sum += e;
    sum_sq += e * e;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - h * hs * hs) <= 3.0 * se);
}

TEST_CASE("Wiener randomization") {
  const SpectralGrid g(2, 16, kTwoPi);
  CHECK(partition_defect(g) <= 1e-12);
  CHECK(window_1d(0.0) == 1.0);
  CHECK(window_1d(1.0) == 0.0);
  CHECK(window_1d(0.5) + window_1d(-0.5) == doctest::Approx(1.0));

  RngStream rng(6, 0, Substream::test);
  const Field u0 = random_field(g, rng);
  const Field u1 = random_field(g, rng);
  const int R = cube_radius(g);
  CHECK(rel_diff(randomize_with(u0, CubeCoefficients::ones(2, R)), u0) <= 1e-12);

  for (auto law : {CoefficientLaw::gaussian, CoefficientLaw::bernoulli}) {
    RandomizationSpec spec;
    spec.law = law;
    RngStream r(3, 0, Substream::randomize);
    const auto [a, b] = wiener_randomize(u0, u1, spec, r);
    for (const Field* f : {&a, &b}) {
      const Field p = to_physical(*f);
      double imag = 0.0;
      for (const auto& z : p.values()) imag = std::max(imag, std::abs(z.imag()));
      CHECK(imag <= 1e-12 * max_abs(p.values()));
      CHECK(p.is_real());
    }
  }

  RngStream r(4, 0, Substream::randomize);
  const auto g1 = CubeCoefficients::draw(2, 3, CoefficientLaw::gaussian, r);
  CHECK(g1.at({0, 0}).imag() == 0.0);
  CHECK(g1.at({1, -2}) == std::conj(g1.at({-1, 2})));

  const SpectralGrid small(2, 16, 3.0);
  CHECK_THROWS_AS(randomize_with(Field::zeros(small, Representation::physical), CubeCoefficients::ones(2, 8)),
                  ConfigError);
}

TEST_CASE("randomized L2 mean matches the window sum") {
  const SpectralGrid g(2, 16, kTwoPi);
  RngStream rng(7, 0, Substream::test);
  const Field u0 = band_limited(g, rng, 5);
  const int R = cube_radius(g);
  const int n = 4096;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    RngStream r(8, static_cast<std::uint64_t>(i), Substream::randomize);
    const double l2 = sobolev_norm(randomize_with(u0, CubeCoefficients::draw(2, R, CoefficientLaw::gaussian, r)),
                                   0.0, SobolevFlavor::inhomogeneous);
    sum += l2 * l2;
    sum_sq += l2 * l2 * l2 * l2;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - oracle::expected_randomized_l2(u0)) <= 3.0 * se);
}

}
