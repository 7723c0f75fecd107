#pragma once

// Periodic box [0, L)^d with M points per axis, fields on it, and Fourier
// multipliers.
//
// Fourier coefficients are taken against the orthonormal basis
// e_k(x) = L^{-d/2} exp(i xi_k . x), xi_k = 2 pi k / L, so that
//   sum_x |f(x)|^2 h_x = sum_k |f_k|^2     (Parseval, exact)
// and a convolution operator with symbol m acts as f_k -> m(xi_k) f_k.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "shnw/aligned.hpp"

namespace shnw {

inline constexpr int kMaxDim = 5;

using LatticeIndex = std::array<int, kMaxDim>;

class SpectralGrid {
 public:
  /// Validates 1 <= d <= 5, M a power of two >= 4, L > 0 (throws ConfigError).
  SpectralGrid(int dim, int points, double length);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return length_ / points_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double box_volume() const noexcept { return cell_volume_ * static_cast<double>(size_); }
  double frequency_step() const noexcept;

  /// Signed lattice index per axis, each in {-M/2, ..., M/2-1}.
  LatticeIndex lattice_index(std::size_t flat) const noexcept;
  /// Inverse of lattice_index; components are taken mod M.
  std::size_t flat_index(const LatticeIndex& k) const noexcept;
  /// Flat index of the mode -k (mod M).
  std::size_t conjugate_index(std::size_t flat) const noexcept { return (*conj_)[flat]; }
  /// Frequency vector xi_k (first dim() entries meaningful).
  std::array<double, kMaxDim> frequency(std::size_t flat) const noexcept;
  /// Physical point x_j = j L / M for the unsigned index j of `flat`.
  std::array<double, kMaxDim> point(std::size_t flat) const noexcept;

  /// |xi_k| for every flat index.
  std::span<const double> abs_frequency() const noexcept { return *abs_xi_; }
  double max_frequency() const noexcept { return max_abs_xi_; }

  bool operator==(const SpectralGrid& o) const noexcept {
    return dim_ == o.dim_ && points_ == o.points_ && length_ == o.length_;
  }

 private:
  int dim_;
  int points_;
  double length_;
  std::size_t size_;
  double cell_volume_;
  double max_abs_xi_ = 0.0;
  std::shared_ptr<const RVector> abs_xi_;
  std::shared_ptr<const std::vector<std::uint32_t>> conj_;
};

SpectralGrid make_grid(int dim, int points, double length);

enum class Representation { physical, fourier };

/// Scalar lattice function. Values are complex in both representations;
/// `is_real()` claims a real physical field (Hermitian spectrum).
class Field {
 public:
  Field(SpectralGrid grid, Representation rep, CVector values, bool real);

  static Field zeros(const SpectralGrid& grid, Representation rep, bool real = true);
  /// Real physical field sampled from f(x).
  static Field from_function(const SpectralGrid& grid,
                             const std::function<double(std::span<const double>)>& f);
  /// Real physical field from a row-major array of M^d samples.
  static Field from_real(const SpectralGrid& grid, std::span<const double> samples);

  const SpectralGrid& grid() const noexcept { return grid_; }
  Representation representation() const noexcept { return rep_; }
  bool is_real() const noexcept { return real_; }
  void set_real(bool real) noexcept { real_ = real; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  CVector& storage() noexcept { return values_; }
  const CVector& storage() const noexcept { return values_; }

 private:
  SpectralGrid grid_;
  Representation rep_;
  CVector values_;
  bool real_;
};

// -- transforms --------------------------------------------------------------

/// Unitary-normalized DFT (orthonormal-basis coefficients). No-op when
/// already in `target`. Real fields come back with exactly zero imaginary
/// parts in physical space.
Field transform(const Field& f, Representation target);
inline Field to_fourier(const Field& f) { return transform(f, Representation::fourier); }
inline Field to_physical(const Field& f) { return transform(f, Representation::physical); }

namespace fft {
/// In-place raw transforms on a buffer of grid.size() values, normalization
/// included. Plans are cached per shape and safe to use from many threads.
void forward(const SpectralGrid& grid, std::span<cplx> data);
void inverse(const SpectralGrid& grid, std::span<cplx> data);
}  // namespace fft

// -- multipliers -------------------------------------------------------------

/// Symbol sampled on a grid. `im` is empty for real symbols.
struct MultiplierTable {
  RVector re;
  RVector im;
  /// m(-k) == conj(m(k)) on every lattice mode: real fields stay real.
  bool hermitian = true;
  bool is_real() const noexcept { return im.empty(); }
};

class FourierMultiplier {
 public:
  using Symbol = std::function<cplx(std::span<const double> xi)>;

  /// `zero_mode_value` replaces the symbol at xi = 0.
  FourierMultiplier(Symbol symbol, cplx zero_mode_value);

  static FourierMultiplier identity();
  static FourierMultiplier radial(std::function<double(double)> profile, double zero_mode_value);

  cplx operator()(std::span<const double> xi) const;
  cplx zero_mode_value() const noexcept { return zero_mode_; }
  MultiplierTable sample(const SpectralGrid& grid) const;

  /// Pointwise product m1 * m2 (zero modes multiply too).
  friend FourierMultiplier operator*(const FourierMultiplier& a, const FourierMultiplier& b);

 private:
  Symbol symbol_;
  cplx zero_mode_;
};

Field apply_multiplier(const Field& f, const FourierMultiplier& m);
Field apply_multiplier(const Field& f, const MultiplierTable& m);

/// |xi|^s (zero mode 0) and <xi>^s = (1 + |xi|^2)^{s/2}.
enum class SobolevFlavor { homogeneous, inhomogeneous };
FourierMultiplier sobolev_multiplier(double s, SobolevFlavor flavor);

// -- Littlewood-Paley --------------------------------------------------------

enum class LpKind { at_most, dyadic, above };

/// Radial mother symbol: 1 on [0, 1], raised-cosine descent to 0 on [1, 2].
double lp_mother(double r);
/// True when N = 2^k for some integer k.
bool is_dyadic(double n);
FourierMultiplier lp_multiplier(LpKind kind, double n);
Field lp_project(const Field& f, LpKind kind, double n);

// -- Riesz potential ---------------------------------------------------------

/// c_{d,gamma} with FT(|x|^{-gamma})(xi) = c |xi|^{gamma-d} on R^d.
double riesz_constant(int dim, double gamma);
/// Integral over the box of the truncated kernel |x|^{-gamma}, by direct
/// summation over minimum-image lattice offsets with x = 0 excluded.
double riesz_zero_mode(const SpectralGrid& grid, double gamma);
/// mu * c |xi|^{gamma-d}; zero mode mu * riesz_zero_mode. Throws DomainError
/// unless 0 < gamma < d.
FourierMultiplier riesz_multiplier(const SpectralGrid& grid, double gamma, double mu);
Field riesz_convolve(const Field& f, double gamma, double mu);

// -- norms -------------------------------------------------------------------

/// (sum_x |f|^r h_x)^{1/r}; r = infinity gives the max modulus.
double lebesgue_norm(const Field& f, double r);
/// Same quadrature on raw physical-space values.
double lebesgue_norm(std::span<const cplx> physical, double r, double cell_volume);
double sobolev_norm(const Field& f, double s, SobolevFlavor flavor);

}  // namespace shnw
