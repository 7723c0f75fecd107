#include <cmath>
#include <numbers>

#include "shnw/errors.hpp"
#include "shnw/simd/kernels.hpp"
#include "shnw/spectral.hpp"

namespace shnw {
namespace {

double norm_of(std::span<const double> xi) {
  double r2 = 0.0;
  for (double v : xi) r2 += v * v;
  return std::sqrt(r2);
}

bool close(cplx a, cplx b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-14 * scale;
}

}  // namespace

FourierMultiplier::FourierMultiplier(Symbol symbol, cplx zero_mode_value)
    : symbol_(std::move(symbol)), zero_mode_(zero_mode_value) {
  if (!std::isfinite(zero_mode_.real()) || !std::isfinite(zero_mode_.imag()))
    throw DomainError("multiplier zero-mode value must be finite");
}

FourierMultiplier FourierMultiplier::identity() {
  return FourierMultiplier([](std::span<const double>) { return cplx(1.0); }, 1.0);
}

FourierMultiplier FourierMultiplier::radial(std::function<double(double)> profile,
                                            double zero_mode_value) {
  return FourierMultiplier(
      [p = std::move(profile)](std::span<const double> xi) { return cplx(p(norm_of(xi))); },
      zero_mode_value);
}

cplx FourierMultiplier::operator()(std::span<const double> xi) const {
  if (norm_of(xi) == 0.0) return zero_mode_;
  return symbol_(xi);
}

MultiplierTable FourierMultiplier::sample(const SpectralGrid& grid) const {
  const std::size_t n = grid.size();
  MultiplierTable t;
  t.re.resize(n);
  RVector im(n);
  bool any_imag = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = grid.frequency(i);
    const cplx v = (*this)(std::span<const double>(xi.data(), grid.dim()));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("multiplier symbol is not finite on the lattice");
    t.re[i] = v.real();
    im[i] = v.imag();
    any_imag = any_imag || v.imag() != 0.0;
  }
  for (std::size_t i = 0; i < n && t.hermitian; ++i) {
    const std::size_t j = grid.conjugate_index(i);
    t.hermitian = close(cplx(t.re[j], im[j]), cplx(t.re[i], -im[i]));
  }
  if (any_imag) t.im = std::move(im);
  return t;
}

FourierMultiplier operator*(const FourierMultiplier& a, const FourierMultiplier& b) {
  return FourierMultiplier([sa = a.symbol_, sb = b.symbol_](
                               std::span<const double> xi) { return sa(xi) * sb(xi); },
                           a.zero_mode_ * b.zero_mode_);
}

Field apply_multiplier(const Field& f, const MultiplierTable& m) {
  Field out = to_fourier(f);
  auto v = out.values();
  if (m.re.size() != v.size()) throw ConfigError("multiplier", "table does not match grid");
  if (m.is_real()) {
    simd::kernels().scale(v.size(), m.re.data(), v.data(), v.data());
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= cplx(m.re[i], m.im[i]);
  }
  out.set_real(f.is_real() && m.hermitian);
  return out;
}

Field apply_multiplier(const Field& f, const FourierMultiplier& m) {
  return apply_multiplier(f, m.sample(f.grid()));
}

FourierMultiplier sobolev_multiplier(double s, SobolevFlavor flavor) {
  if (flavor == SobolevFlavor::homogeneous)
    return FourierMultiplier::radial([s](double r) { return std::pow(r, s); }, 0.0);
  return FourierMultiplier::radial([s](double r) { return std::pow(1.0 + r * r, 0.5 * s); }, 1.0);
}

double lp_mother(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (r - 1.0));
  return c * c;
}

bool is_dyadic(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  int e = 0;
  return std::frexp(n, &e) == 0.5;
}

FourierMultiplier lp_multiplier(LpKind kind, double n) {
  if (!is_dyadic(n)) throw DomainError("Littlewood-Paley level must be a power of two");
  switch (kind) {
    case LpKind::at_most:
      return FourierMultiplier::radial([n](double r) { return lp_mother(r / n); }, 1.0);
    case LpKind::dyadic:
      return FourierMultiplier::radial(
          [n](double r) { return lp_mother(r / n) - lp_mother(2.0 * r / n); }, 0.0);
    case LpKind::above:
      return FourierMultiplier::radial([n](double r) { return 1.0 - lp_mother(r / n); }, 0.0);
  }
  throw DomainError("unknown Littlewood-Paley kind");
}

Field lp_project(const Field& f, LpKind kind, double n) {
  return apply_multiplier(f, lp_multiplier(kind, n));
}

double riesz_constant(int dim, double gamma) {
  const double d = dim;
  return std::pow(std::numbers::pi, 0.5 * d) * std::pow(2.0, d - gamma) *
         std::tgamma(0.5 * (d - gamma)) / std::tgamma(0.5 * gamma);
}

double riesz_zero_mode(const SpectralGrid& grid, double gamma) {
  const double h = grid.spacing();
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const LatticeIndex j = grid.lattice_index(i);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += (j[a] * h) * (j[a] * h);
    sum += std::pow(r2, -0.5 * gamma);
  }
  return sum * grid.cell_volume();
}

FourierMultiplier riesz_multiplier(const SpectralGrid& grid, double gamma, double mu) {
  if (!(gamma > 0.0 && gamma < grid.dim()))
    throw DomainError("potential exponent out of range: need 0 < gamma < d");
  const double c = mu * riesz_constant(grid.dim(), gamma);
  const double p = gamma - grid.dim();
  return FourierMultiplier::radial([c, p](double r) { return c * std::pow(r, p); },
                                   mu * riesz_zero_mode(grid, gamma));
}

Field riesz_convolve(const Field& f, double gamma, double mu) {
  Field out = apply_multiplier(f, riesz_multiplier(f.grid(), gamma, mu));
  return f.representation() == Representation::physical ? to_physical(out) : out;
}

}  // namespace shnw
