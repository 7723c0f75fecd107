#include <algorithm>
#include <cmath>

#include "shnw/diagnostics.hpp"
#include "shnw/errors.hpp"

namespace shnw {

std::vector<double> EnsembleSummary::standard_error(const std::string& column) const {
  const auto it = variances.find(column);
  if (it == variances.end()) throw DomainError("unknown column '" + column + "'");
  std::vector<double> se(it->second.size());
  for (std::size_t i = 0; i < se.size(); ++i)
    se[i] = std::sqrt(it->second[i] / static_cast<double>(count));
  return se;
}

EnsembleSummary summarize(std::span<const std::vector<DiagnosticsRecord>> trajectories) {
  if (trajectories.empty()) throw DomainError("no trajectories to summarize");
  std::size_t rows = trajectories.front().size();
  for (const auto& tr : trajectories) rows = std::min(rows, tr.size());

  EnsembleSummary s;
  s.count = trajectories.size();
  const double n = static_cast<double>(s.count);
  for (std::size_t i = 0; i < rows; ++i) s.times.push_back(trajectories.front()[i].t);

  for (const auto& [name, member] : kRecordColumns) {
    if (name == "t") continue;
    std::vector<double> mean(rows, 0.0), var(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (const auto& tr : trajectories) acc += tr[i].*member;
      mean[i] = acc / n;
      if (s.count > 1) {
        double sq = 0.0;
        for (const auto& tr : trajectories) {
          const double d = tr[i].*member - mean[i];
          sq += d * d;
        }
        var[i] = sq / (n - 1.0);
      }
    }
    s.means.emplace(std::string(name), std::move(mean));
    s.variances.emplace(std::string(name), std::move(var));
  }
  return s;
}

}  // namespace shnw
