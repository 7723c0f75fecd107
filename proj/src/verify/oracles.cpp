#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shnw/verify.hpp"

namespace shnw::oracle {
namespace {

// signed index of j in {0..M-1} mapped to {-M/2..M/2-1}
int centered(int j, int m) { return j >= m / 2 ? j - m : j; }

std::vector<std::array<int, kMaxDim>> all_indices(const SpectralGrid& g) {
  std::vector<std::array<int, kMaxDim>> out(g.size());
  const int m = g.points();
  for (std::size_t f = 0; f < g.size(); ++f) {
    std::size_t rest = f;
    std::array<int, kMaxDim> j{};
    for (int a = g.dim() - 1; a >= 0; --a) {
      j[a] = static_cast<int>(rest % m);
      rest /= m;
    }
    out[f] = j;
  }
  return out;
}

std::size_t flat(const std::array<int, kMaxDim>& j, int dim, int m) {
  std::size_t f = 0;
  for (int a = 0; a < dim; ++a) f = f * m + static_cast<std::size_t>(((j[a] % m) + m) % m);
  return f;
}

double box_window(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double c = std::cos(std::numbers::pi * x / 2.0);
  return c * c;
}

}  // namespace

double riesz_constant(int d, double gamma) {
  return std::pow(std::numbers::pi, 0.5 * d) * std::pow(2.0, d - gamma) *
         std::tgamma(0.5 * (d - gamma)) / std::tgamma(0.5 * gamma);
}

std::vector<double> periodic_kernel(const SpectralGrid& grid, double gamma, double mu) {
  const int d = grid.dim();
  const int m = grid.points();
  const double L = grid.length();
  const double hx = L / m;
  const auto idx = all_indices(grid);

  double zero = 0.0;
  for (std::size_t f = 1; f < idx.size(); ++f) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double x = centered(idx[f][a], m) * hx;
      r2 += x * x;
    }
    zero += std::pow(std::sqrt(r2), -gamma);
  }
  zero *= mu * std::pow(hx, d);

  const double c = mu * riesz_constant(d, gamma);
  std::vector<double> symbol(idx.size());
  for (std::size_t f = 0; f < idx.size(); ++f) {
    double xi2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double xi = 2.0 * std::numbers::pi * centered(idx[f][a], m) / L;
      xi2 += xi * xi;
    }
    symbol[f] = f == 0 ? zero : c * std::pow(std::sqrt(xi2), gamma - d);
  }

  std::vector<double> cos_table(m);
  for (int p = 0; p < m; ++p) cos_table[p] = std::cos(2.0 * std::numbers::pi * p / m);

  std::vector<double> kernel(idx.size());
  const double norm = std::pow(L, -d);
  for (std::size_t x = 0; x < idx.size(); ++x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      long phase = 0;
      for (int a = 0; a < d; ++a) phase += static_cast<long>(idx[k][a]) * idx[x][a];
      acc += symbol[k] * cos_table[static_cast<std::size_t>(phase % m)];
    }
    kernel[x] = norm * acc;
  }
  return kernel;
}

std::vector<double> direct_convolution(const SpectralGrid& grid, const std::vector<double>& kernel,
                                       const std::vector<double>& f) {
  const int d = grid.dim();
  const int m = grid.points();
  const auto idx = all_indices(grid);
  const double hx = grid.cell_volume();
  std::vector<double> out(idx.size(), 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      std::array<int, kMaxDim> diff{};
      for (int a = 0; a < d; ++a) diff[a] = idx[i][a] - idx[j][a];
      acc += kernel[flat(diff, d, m)] * f[j];
    }
    out[i] = acc * hx;
  }
  return out;
}

double direct_potential_energy(const SpectralGrid& grid, double gamma, double mu,
                               const std::vector<double>& u) {
  std::vector<double> sq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u[i] * u[i];
  const auto conv = direct_convolution(grid, periodic_kernel(grid, gamma, mu), sq);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) e += sq[i] * conv[i];
  return 0.25 * e * grid.cell_volume();
}

std::vector<double> direct_hartree(const SpectralGrid& grid, double gamma, double mu,
                                   const std::vector<double>& u) {
  std::vector<double> sq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u[i] * u[i];
  auto conv = direct_convolution(grid, periodic_kernel(grid, gamma, mu), sq);
  for (std::size_t i = 0; i < u.size(); ++i) conv[i] *= u[i];
  return conv;
}

Covariance quadrature_covariance(double omega, double h) {
  using boost::math::quadrature::gauss_kronrod;
  if (omega == 0.0) return {h * h * h / 3.0, h, h * h / 2.0};
  // fixed panels of at most an eighth of a period, 61-point rule on each
  const int panels = std::max(1, static_cast<int>(std::ceil(8.0 * omega * h / (2.0 * std::numbers::pi))));
  const auto integrate = [h, panels](auto f) {
    double sum = 0.0;
    for (int p = 0; p < panels; ++p)
      sum += gauss_kronrod<double, 61>::integrate(f, h * p / panels, h * (p + 1) / panels, 0);
    return sum;
  };
  const double a = integrate([omega](double s) {
    const double v = std::sin(omega * s) / omega;
    return v * v;
  });
  const double b = integrate([omega](double s) {
    const double v = std::cos(omega * s);
    return v * v;
  });
  const double c = integrate([omega](double s) { return std::sin(omega * s) * std::cos(omega * s) / omega; });
  return {a, b, c};
}

Covariance compose_half_steps(double omega, const Covariance& half, double h) {
  const double t = 0.5 * h;
  const double co = std::cos(omega * t);
  const double q = omega == 0.0 ? t : std::sin(omega * t) / omega;
  const double r = -omega * std::sin(omega * t);
  // S = [[co, q], [r, co]]
  const double s00 = co * (co * half.a + q * half.c) + q * (co * half.c + q * half.b);
  const double s01 = r * (co * half.a + q * half.c) + co * (co * half.c + q * half.b);
  const double s11 = r * (r * half.a + co * half.c) + co * (r * half.c + co * half.b);
  return {s00 + half.a, s11 + half.b, s01 + half.c};
}

double partition_sum(const std::array<double, kMaxDim>& xi, int dim) {
  std::array<int, kMaxDim> lo{};
  for (int a = 0; a < dim; ++a) lo[a] = static_cast<int>(std::floor(xi[a])) - 2;
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= 5;
  double sum = 0.0;
  for (int c = 0; c < total; ++c) {
    int rest = c;
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      const int n = lo[a] + rest % 5;
      rest /= 5;
      w *= box_window(xi[a] - n);
    }
    sum += w;
  }
  return sum;
}

double expected_randomized_l2(const Field& u) {
  const Field f = to_fourier(u);
  const SpectralGrid& g = f.grid();
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = g.frequency(k);
    std::array<int, kMaxDim> lo{};
    for (int a = 0; a < g.dim(); ++a) lo[a] = static_cast<int>(std::floor(xi[a])) - 2;
    int count = 1;
    for (int a = 0; a < g.dim(); ++a) count *= 5;
    double s2 = 0.0;
    for (int c = 0; c < count; ++c) {
      int rest = c;
      double w = 1.0;
      for (int a = 0; a < g.dim(); ++a) {
        w *= box_window(xi[a] - (lo[a] + rest % 5));
        rest /= 5;
      }
      s2 += w * w;
    }
    total += std::norm(f.values()[k]) * s2;
  }
  return total;
}

std::pair<cplx, cplx> wave_mode(double omega, cplx u, cplx ut, double t) {
  if (omega == 0.0) return {u + t * ut, ut};
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {c * u + (s / omega) * ut, -omega * s * u + c * ut};
}

}  // namespace shnw::oracle
