#pragma once

// Free wave flow on the torus, mode by mode:
//   Q(t)      : sin(t|xi|)/|xi|        (t on the zero mode)
//   S(t)      : (u, ut) -> (cos u + Q ut, -|xi| sin u + cos ut)
//   S~(t)     : -(|xi|/<xi>) sin u0 + (cos/<xi>) u1
// The zero mode moves as a free particle (u + t ut, ut).

#include "shnw/spectral.hpp"

namespace shnw {

struct WaveState {
  Field u;
  Field ut;
  double t = 0.0;

  static WaveState zeros(const SpectralGrid& grid, Representation rep = Representation::fourier);
};

/// Per-mode coefficients of the flow over a fixed step h.
class Propagator {
 public:
  Propagator(const SpectralGrid& grid, double h);

  double step() const noexcept { return h_; }
  /// cos(h|xi|)
  const RVector& cos_table() const noexcept { return cos_; }
  /// sin(h|xi|)/|xi|, h on the zero mode: the symbol of Q(h).
  const RVector& q_table() const noexcept { return q_; }
  /// -|xi| sin(h|xi|)
  const RVector& minus_w_sin_table() const noexcept { return mws_; }

  /// In-place flow of Fourier coefficients.
  void advance(std::span<cplx> u_hat, std::span<cplx> ut_hat) const;

 private:
  double h_;
  RVector cos_;
  RVector q_;
  RVector mws_;
};

Field apply_Q(const Field& f, double t);
WaveState propagate(const WaveState& state, double t);
Field apply_Stilde(const WaveState& state, double t);

/// (1/2)(||grad u||^2 + ||ut||^2).
double linear_energy(const WaveState& state);

}  // namespace shnw
