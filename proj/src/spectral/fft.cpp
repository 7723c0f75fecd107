#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "shnw/simd/kernels.hpp"
#include "shnw/spectral.hpp"

namespace shnw {
namespace {

// The FFTW planner is not thread-safe; execution on new arrays is. Plans are
// built once per (d, M, sign) under a lock and never destroyed.
class PlanCache {
 public:
  fftw_plan get(int dim, int points, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dim, points, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::size_t n = 1;
    int dims[kMaxDim];
    for (int a = 0; a < dim; ++a) {
      dims[a] = points;
      n *= static_cast<std::size_t>(points);
    }
    CVector scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(const SpectralGrid& grid, std::span<cplx> data, int sign, double scale) {
  fftw_plan plan = cache().get(grid.dim(), grid.points(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  if (fftw_alignment_of(reinterpret_cast<double*>(buf)) != 0) {
    // Unaligned caller buffer (e.g. a std::vector view): go through aligned scratch.
    CVector tmp(data.begin(), data.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(tmp.data()));
    std::copy(tmp.begin(), tmp.end(), data.begin());
  } else {
    fftw_execute_dft(plan, buf, buf);
  }
  simd::kernels().scal(data.size(), scale, data.data());
}

}  // namespace

namespace fft {

void forward(const SpectralGrid& grid, std::span<cplx> data) {
  // f_k = L^{d/2} / M^d * sum_x f(x) exp(-i xi_k x)
  const double scale = std::pow(grid.length(), 0.5 * grid.dim()) / static_cast<double>(grid.size());
  execute(grid, data, FFTW_FORWARD, scale);
}

void inverse(const SpectralGrid& grid, std::span<cplx> data) {
  const double scale = std::pow(grid.length(), -0.5 * grid.dim());
  execute(grid, data, FFTW_BACKWARD, scale);
}

}  // namespace fft

Field transform(const Field& f, Representation target) {
  if (f.representation() == target) return f;
  CVector v = f.storage();
  if (target == Representation::fourier) {
    fft::forward(f.grid(), v);
  } else {
    fft::inverse(f.grid(), v);
    if (f.is_real())
      for (auto& z : v) z = cplx(z.real(), 0.0);
  }
  return Field(f.grid(), target, std::move(v), f.is_real());
}

}  // namespace shnw
