#include <cmath>
#include <numbers>

#include "shnw/errors.hpp"
#include "shnw/spectral.hpp"

namespace shnw {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int wrap_signed(int i, int m) { return i < m / 2 ? i : i - m; }

}  // namespace

SpectralGrid::SpectralGrid(int dim, int points, double length)
    : dim_(dim), points_(points), length_(length) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("d", "dimension out of range (1..5)");
  if (points < 4 || !is_power_of_two(points))
    throw ConfigError("M", "points per axis must be a power of two >= 4");
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("L", "domain length must be positive and finite");

  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points);
  if (size_ > (std::size_t{1} << 31)) throw ConfigError("M", "grid too large");
  cell_volume_ = std::pow(length / points, dim);

  auto abs_xi = std::make_shared<RVector>(size_);
  auto conj = std::make_shared<std::vector<std::uint32_t>>(size_);
  const double dk = frequency_step();
  for (std::size_t i = 0; i < size_; ++i) {
    const LatticeIndex k = lattice_index(i);
    double r2 = 0.0;
    LatticeIndex neg{};
    for (int a = 0; a < dim; ++a) {
      r2 += (k[a] * dk) * (k[a] * dk);
      neg[a] = -k[a];
    }
    (*abs_xi)[i] = std::sqrt(r2);
    (*conj)[i] = static_cast<std::uint32_t>(flat_index(neg));
    max_abs_xi_ = std::max(max_abs_xi_, (*abs_xi)[i]);
  }
  abs_xi_ = std::move(abs_xi);
  conj_ = std::move(conj);
}

double SpectralGrid::frequency_step() const noexcept {
  return 2.0 * std::numbers::pi / length_;
}

LatticeIndex SpectralGrid::lattice_index(std::size_t flat) const noexcept {
  LatticeIndex k{};
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = wrap_signed(static_cast<int>(flat % points_), points_);
    flat /= points_;
  }
  return k;
}

std::size_t SpectralGrid::flat_index(const LatticeIndex& k) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int i = ((k[a] % points_) + points_) % points_;
    flat = flat * points_ + static_cast<std::size_t>(i);
  }
  return flat;
}

std::array<double, kMaxDim> SpectralGrid::frequency(std::size_t flat) const noexcept {
  const LatticeIndex k = lattice_index(flat);
  std::array<double, kMaxDim> xi{};
  const double dk = frequency_step();
  for (int a = 0; a < dim_; ++a) xi[a] = k[a] * dk;
  return xi;
}

std::array<double, kMaxDim> SpectralGrid::point(std::size_t flat) const noexcept {
  std::array<double, kMaxDim> x{};
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = static_cast<double>(flat % points_) * spacing();
    flat /= points_;
  }
  return x;
}

SpectralGrid make_grid(int dim, int points, double length) {
  return SpectralGrid(dim, points, length);
}

}  // namespace shnw
