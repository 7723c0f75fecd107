#include "shnw/errors.hpp"
#include "shnw/spectral.hpp"

namespace shnw {

Field::Field(SpectralGrid grid, Representation rep, CVector values, bool real)
    : grid_(std::move(grid)), rep_(rep), values_(std::move(values)), real_(real) {
  if (values_.size() != grid_.size())
    throw ConfigError("values", "length must equal M^d");
}

Field Field::zeros(const SpectralGrid& grid, Representation rep, bool real) {
  return Field(grid, rep, CVector(grid.size()), real);
}

Field Field::from_function(const SpectralGrid& grid,
                           const std::function<double(std::span<const double>)>& f) {
  CVector v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = grid.point(i);
    v[i] = cplx(f(std::span<const double>(x.data(), grid.dim())), 0.0);
  }
  return Field(grid, Representation::physical, std::move(v), true);
}

Field Field::from_real(const SpectralGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw ConfigError("values", "length must equal M^d");
  CVector v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(samples[i], 0.0);
  return Field(grid, Representation::physical, std::move(v), true);
}

}  // namespace shnw
