#include <cmath>

#include "shnw/dynamics.hpp"
#include "shnw/errors.hpp"
#include "shnw/simd/kernels.hpp"

namespace shnw {
namespace {

void keep_real(CVector& v) {
  for (auto& z : v) z = cplx(z.real(), 0.0);
}

}  // namespace

std::optional<MultiplierTable> truncation_table(const SpectralGrid& grid, std::optional<double> n) {
  if (!n) return std::nullopt;
  MultiplierTable t = lp_multiplier(LpKind::at_most, *n).sample(grid);
  for (double v : t.re)
    if (v != 1.0) return t;
  return std::nullopt;
}

HartreeOperator::HartreeOperator(const SpectralGrid& grid, double gamma, double mu,
                                 std::optional<double> truncation, bool dealias)
    : grid_(grid), truncation_(truncation_table(grid, truncation)) {
  if (!(gamma > 0.0 && gamma < grid.dim()))
    throw DomainError("potential exponent out of range: need 0 < gamma < d");
  if (mu == 0.0) return;
  riesz_ = riesz_multiplier(grid, gamma, mu).sample(grid).re;
  if (dealias) {
    // 2/3 rule on u^2: drop modes with some |k_i| > M/3
    dealias_.assign(grid.size(), 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const LatticeIndex k = grid.lattice_index(i);
      for (int a = 0; a < grid.dim(); ++a)
        if (3 * std::abs(k[a]) > grid.points()) dealias_[i] = 0.0;
    }
  }
  u_phys_.resize(grid.size());
  work_.resize(grid.size());
}

void HartreeOperator::apply(std::span<const cplx> u_hat, std::span<cplx> n_hat, double t) {
  if (!active()) {
    std::fill(n_hat.begin(), n_hat.end(), cplx(0.0));
    return;
  }
  const auto& k = simd::kernels();
  const std::size_t n = grid_.size();
  std::copy(u_hat.begin(), u_hat.end(), u_phys_.begin());
  fft::inverse(grid_, u_phys_);
  keep_real(u_phys_);

  k.mul_real(n, u_phys_.data(), u_phys_.data(), work_.data());
  fft::forward(grid_, work_);
  if (!dealias_.empty()) k.scale(n, dealias_.data(), work_.data(), work_.data());
  k.scale(n, riesz_.data(), work_.data(), work_.data());
  fft::inverse(grid_, work_);
  keep_real(work_);

  k.mul_real(n, work_.data(), u_phys_.data(), n_hat.data());
  fft::forward(grid_, n_hat);
  if (truncation_) k.scale(n, truncation_->re.data(), n_hat.data(), n_hat.data());

  if (!std::isfinite(k.sum_sq(n, n_hat.data())))
    throw IntegrationError("non-finite nonlinearity", t);
}

Field hartree_nonlinearity(const Field& u, double gamma, double mu,
                           std::optional<double> truncation, bool dealias) {
  if (!u.is_real()) throw DomainError("nonlinearity needs a real field");
  HartreeOperator op(u.grid(), gamma, mu, truncation, dealias);
  const Field u_hat = to_fourier(u);
  Field out = Field::zeros(u.grid(), Representation::fourier);
  op.apply(u_hat.values(), out.values());
  return to_physical(out);
}

}  // namespace shnw
