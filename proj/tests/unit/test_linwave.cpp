#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "shnw/linwave.hpp"
#include "shnw/verify.hpp"

using namespace shnw;
using namespace testutil;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field single_mode(const SpectralGrid& g, const LatticeIndex& k, cplx value) {
  CVector c(g.size(), cplx(0.0));
  c[g.flat_index(k)] = value;
  return Field(g, Representation::fourier, std::move(c), false);
}

}  // namespace

TEST_SUITE("linwave") {

TEST_CASE("apply_Q examples") {
  const SpectralGrid g(2, 8, kTwoPi);
  RngStream rng(1, 0, Substream::test);
  const Field f = random_field(g, rng);
  CHECK(max_abs(apply_Q(f, 0.0).values()) == 0.0);

  const Field c = Field::from_function(g, [](std::span<const double>) { return 2.0; });
  const Field qc = to_physical(apply_Q(c, 0.3));
  for (const auto& z : qc.values()) CHECK(z.real() == doctest::Approx(0.6));

  const LatticeIndex k{2, 0};
  const Field q = apply_Q(single_mode(g, k, 1.0), std::numbers::pi / 4.0);
  CHECK(q.values()[g.flat_index(k)].real() == doctest::Approx(0.5));
}

TEST_CASE("propagate examples and invariants") {
  const SpectralGrid g(3, 8, kTwoPi);
  RngStream rng(2, 0, Substream::test);
  const WaveState s{to_fourier(random_field(g, rng)), to_fourier(random_field(g, rng)), 0.25};

  const WaveState same = propagate(s, 0.0);
  CHECK(max_diff(same.u.values(), s.u.values()) == 0.0);
  CHECK(same.t == 0.25);

  const LatticeIndex k{1, 2, -2};
  const double w = 3.0;
  const double t = 0.7;
  const WaveState m = propagate(WaveState{single_mode(g, k, 1.0), Field::zeros(g, Representation::fourier, false), 0.0}, t);
  CHECK(m.u.values()[g.flat_index(k)].real() == doctest::Approx(std::cos(w * t)));
  CHECK(m.ut.values()[g.flat_index(k)].real() == doctest::Approx(-w * std::sin(w * t)));
  CHECK(m.t == doctest::Approx(t));

  // zero mode is a free particle
  CVector u0(g.size(), cplx(0.0)), u1(g.size(), cplx(0.0));
  u0[0] = 1.0;
  u1[0] = 2.0;
  const WaveState z = propagate(WaveState{Field(g, Representation::fourier, u0, true),
                                          Field(g, Representation::fourier, u1, true), 0.0},
                                1.5);
  CHECK(z.u.values()[0].real() == doctest::Approx(4.0));
  CHECK(z.ut.values()[0].real() == doctest::Approx(2.0));

  const WaveState ab = propagate(propagate(s, 0.4), 1.1);
  const WaveState direct = propagate(s, 1.5);
  CHECK(max_diff(ab.u.values(), direct.u.values()) <= 1e-12 * max_abs(direct.u.values()));
  CHECK(max_diff(ab.ut.values(), direct.ut.values()) <= 1e-12 * max_abs(direct.ut.values()));

  const WaveState back = propagate(propagate(s, 2.3), -2.3);
  CHECK(max_diff(back.u.values(), s.u.values()) <= 1e-12 * max_abs(s.u.values()));

  for (int n = 0; n < 100; ++n) {
    const WaveState r{random_field(g, rng), random_field(g, rng), 0.0};
    const double e0 = linear_energy(r);
    const double e1 = linear_energy(propagate(r, 10.0 * rng.uniform() - 5.0));
    CHECK(std::abs(e1 - e0) <= 1e-12 * e0);
  }
}

TEST_CASE("propagated mode solves the wave equation") {
  // centered second difference in t of the closed form
  const double w = 2.5, h = 1e-4;
  const cplx u(0.3, -0.2), ut(1.1, 0.4);
  for (double t : {0.1, 0.9, 2.7}) {
    const auto p = oracle::wave_mode(w, u, ut, t + h).first;
    const auto c = oracle::wave_mode(w, u, ut, t).first;
    const auto m = oracle::wave_mode(w, u, ut, t - h).first;
    const cplx residual = (p - 2.0 * c + m) / (h * h) + w * w * c;
    CHECK(std::abs(residual) <= 1e-6);
  }
}

TEST_CASE("apply_Stilde") {
  const SpectralGrid g(2, 8, kTwoPi);
  RngStream rng(3, 0, Substream::test);
  const WaveState s{random_field(g, rng), random_field(g, rng), 0.0};

  const Field at0 = apply_Stilde(s, 0.0);
  const Field ref = apply_multiplier(s.ut, sobolev_multiplier(-1.0, SobolevFlavor::inhomogeneous));
  CHECK(rel_diff(at0, ref) <= 1e-12);

  const double t = 0.83;
  const Field lifted = apply_multiplier(apply_Stilde(s, t), sobolev_multiplier(1.0, SobolevFlavor::inhomogeneous));
  CHECK(rel_diff(lifted, propagate(s, t).ut) <= 1e-12);

  const WaveState zero = WaveState::zeros(g);
  CHECK(max_abs(apply_Stilde(zero, 1.0).values()) == 0.0);
}

}
