#include <cmath>
#include <numbers>

#include "shnw/errors.hpp"
#include "shnw/stochastic.hpp"

namespace shnw {
namespace {

// Integers n with |x - n| < 1, and their window weights.
struct AxisCubes {
  int count = 0;
  int n[2]{};
  double w[2]{};
};

AxisCubes axis_cubes(double x) {
  AxisCubes out;
  const int lo = static_cast<int>(std::floor(x));
  for (int n = lo; n <= lo + 1; ++n) {
    const double w = window_1d(x - n);
    if (w > 0.0) {
      out.n[out.count] = n;
      out.w[out.count] = w;
      ++out.count;
    }
  }
  return out;
}

// Last nonzero component positive: one representative of each {n, -n}.
bool canonical(const LatticeIndex& n, int dim) {
  for (int a = dim - 1; a >= 0; --a)
    if (n[a] != 0) return n[a] > 0;
  return true;
}

}  // namespace

double window_1d(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * x);
  return c * c;
}

double window(std::span<const double> xi) {
  double w = 1.0;
  for (double x : xi) w *= window_1d(x);
  return w;
}

double partition_defect(const SpectralGrid& grid) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.frequency(i);
    // The tensor window's partition sum factorizes over axes.
    double total = 1.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const AxisCubes c = axis_cubes(xi[a]);
      double s = 0.0;
      for (int j = 0; j < c.count; ++j) s += c.w[j];
      total *= s;
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

CubeCoefficients::CubeCoefficients(int dim, int radius) : dim_(dim), radius_(radius) {
  if (dim < 1 || dim > kMaxDim || radius < 0) throw ConfigError("cubes", "invalid cube box");
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(2 * radius + 1);
  values_.assign(n, cplx(0.0));
}

std::size_t CubeCoefficients::offset(const LatticeIndex& n) const {
  std::size_t off = 0;
  for (int a = 0; a < dim_; ++a) {
    if (std::abs(n[a]) > radius_) throw ConfigError("cubes", "cube index outside coefficient box");
    off = off * static_cast<std::size_t>(2 * radius_ + 1) + static_cast<std::size_t>(n[a] + radius_);
  }
  return off;
}

cplx CubeCoefficients::at(const LatticeIndex& n) const { return values_[offset(n)]; }

void CubeCoefficients::set(const LatticeIndex& n, cplx value) { values_[offset(n)] = value; }

CubeCoefficients CubeCoefficients::ones(int dim, int radius) {
  CubeCoefficients g(dim, radius);
  std::fill(g.values_.begin(), g.values_.end(), cplx(1.0));
  return g;
}

CubeCoefficients CubeCoefficients::draw(int dim, int radius, CoefficientLaw law, RngStream& rng) {
  CubeCoefficients g(dim, radius);
  const int side = 2 * radius + 1;
  constexpr double kHalf = std::numbers::sqrt2 / 2.0;
  for (std::size_t off = 0; off < g.values_.size(); ++off) {
    LatticeIndex n{};
    std::size_t rest = off;
    for (int a = dim - 1; a >= 0; --a) {
      n[a] = static_cast<int>(rest % side) - radius;
      rest /= side;
    }
    if (!canonical(n, dim)) continue;
    LatticeIndex neg{};
    bool zero = true;
    for (int a = 0; a < dim; ++a) {
      neg[a] = -n[a];
      zero = zero && n[a] == 0;
    }
    cplx v;
    if (law == CoefficientLaw::bernoulli) {
      v = cplx(rng.sign());
    } else if (zero) {
      v = cplx(rng.normal());
    } else {
      const double re = rng.normal();
      const double im = rng.normal();
      v = cplx(kHalf * re, kHalf * im);
    }
    g.values_[off] = v;
    g.set(neg, std::conj(v));
  }
  return g;
}

int cube_radius(const SpectralGrid& grid) {
  const double max_axis = 0.5 * grid.points() * grid.frequency_step();
  return static_cast<int>(std::ceil(max_axis + 1.0)) - 1;
}

Field randomize_with(const Field& u, const CubeCoefficients& g) {
  const SpectralGrid& grid = u.grid();
  if (grid.length() < 2.0 * std::numbers::pi * (1.0 - 1e-12))
    throw ConfigError("L", "Wiener randomization needs L >= 2 pi (lattice spacing <= 1)");
  if (g.dim() != grid.dim()) throw ConfigError("cubes", "coefficient dimension mismatch");

  Field out = to_fourier(u);
  auto v = out.values();
  const int d = grid.dim();
  std::array<AxisCubes, kMaxDim> axes{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.frequency(i);
    int combos = 1;
    for (int a = 0; a < d; ++a) {
      axes[a] = axis_cubes(xi[a]);
      combos *= axes[a].count;
    }
    cplx total(0.0);
    for (int c = 0; c < combos; ++c) {
      LatticeIndex n{};
      double w = 1.0;
      int rest = c;
      for (int a = 0; a < d; ++a) {
        const int j = rest % axes[a].count;
        rest /= axes[a].count;
        n[a] = axes[a].n[j];
        w *= axes[a].w[j];
      }
      total += w * g.at(n);
    }
    // Self-conjugate lattice modes (zero / Nyquist) stand for both +xi and
    // -xi; keep the real part so real data stays real.
    if (u.is_real() && grid.conjugate_index(i) == i) total = cplx(total.real(), 0.0);
    v[i] *= total;
  }
  return u.representation() == Representation::physical ? to_physical(out) : out;
}

std::pair<Field, Field> wiener_randomize(const Field& u0, const Field& u1,
                                         const RandomizationSpec& spec, RngStream& rng) {
  const int radius = cube_radius(u0.grid());
  const CubeCoefficients g0 = CubeCoefficients::draw(u0.grid().dim(), radius, spec.law, rng);
  const CubeCoefficients g1 = CubeCoefficients::draw(u1.grid().dim(), radius, spec.law, rng);
  return {randomize_with(u0, g0), randomize_with(u1, g1)};
}

}  // namespace shnw
