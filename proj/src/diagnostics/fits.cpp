#include <algorithm>
#include <cmath>
#include <limits>

#include "shnw/diagnostics.hpp"
#include "shnw/errors.hpp"

namespace shnw {
namespace {

struct WeightedLine {
  std::vector<std::size_t> rows;
  std::vector<double> coef;  // slope = sum coef_i y_i
  double slope = 0.0;
  double intercept = 0.0;
  double s_tt = 0.0;
  bool weighted = false;
};

WeightedLine fit_mean_energy(const EnsembleSummary& summary, double t0, double t1) {
  if (summary.count < 2) throw DomainError("degenerate window: need at least two trajectories");
  WeightedLine line;
  for (std::size_t i = 0; i < summary.times.size(); ++i)
    if (summary.times[i] >= t0 && summary.times[i] <= t1) line.rows.push_back(i);
  if (line.rows.size() < 4) throw DomainError("degenerate window: need at least four sample times");

  const auto& mean = summary.means.at("E_total");
  const std::vector<double> se = summary.standard_error("E_total");
  line.weighted = std::all_of(line.rows.begin(), line.rows.end(), [&](std::size_t i) { return se[i] > 0.0; });

  std::vector<double> w(line.rows.size(), 1.0);
  if (line.weighted)
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = 1.0 / (se[line.rows[j]] * se[line.rows[j]]);

  double sw = 0.0, st = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    sw += w[j];
    st += w[j] * summary.times[line.rows[j]];
    sy += w[j] * mean[line.rows[j]];
  }
  const double tbar = st / sw;
  const double ybar = sy / sw;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double dt = summary.times[line.rows[j]] - tbar;
    line.s_tt += w[j] * dt * dt;
  }
  if (!(line.s_tt > 0.0)) throw DomainError("degenerate window: all sample times equal");
  line.coef.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    line.coef[j] = w[j] * (summary.times[line.rows[j]] - tbar) / line.s_tt;
    line.slope += line.coef[j] * mean[line.rows[j]];
  }
  line.intercept = ybar - line.slope * tbar;
  return line;
}

}  // namespace

DriftFit ito_drift_fit(const EnsembleSummary& summary, double t0, double t1) {
  const WeightedLine line = fit_mean_energy(summary, t0, t1);
  DriftFit fit{line.slope, 0.0, line.intercept, line.rows.size()};
  if (line.weighted) {
    fit.std_error = std::sqrt(1.0 / line.s_tt);
  } else {
    const auto& mean = summary.means.at("E_total");
    double rss = 0.0;
    for (std::size_t i : line.rows) {
      const double r = mean[i] - (line.intercept + line.slope * summary.times[i]);
      rss += r * r;
    }
    fit.std_error = std::sqrt(rss / static_cast<double>(line.rows.size() - 2) / line.s_tt);
  }
  return fit;
}

DriftFit ito_drift_fit(const EnsembleSummary& summary,
                       std::span<const std::vector<DiagnosticsRecord>> trajectories, double t0,
                       double t1) {
  const WeightedLine line = fit_mean_energy(summary, t0, t1);
  if (trajectories.size() != summary.count)
    throw DomainError("trajectory count does not match the summary");
  std::vector<double> slopes;
  slopes.reserve(trajectories.size());
  for (const auto& tr : trajectories) {
    double s = 0.0;
    for (std::size_t j = 0; j < line.rows.size(); ++j) s += line.coef[j] * tr[line.rows[j]].E_total;
    slopes.push_back(s);
  }
  const double n = static_cast<double>(slopes.size());
  double mean = 0.0;
  for (double s : slopes) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : slopes) var += (s - mean) * (s - mean);
  var /= (n - 1.0);
  return {line.slope, std::sqrt(var / n), line.intercept, line.rows.size()};
}

TailFit tail_estimate(std::span<const double> samples, std::span<const double> lambdas) {
  if (samples.size() < 100) throw DomainError("tail estimate needs at least 100 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw DomainError("degenerate distribution: all samples equal");

  const auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double q_lo = quantile(0.5);
  const double q_hi = quantile(0.95);
  const double n = static_cast<double>(sorted.size());

  TailFit fit;
  std::vector<double> xs, ys;
  for (double lam : lambdas) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lam);
    const double p = static_cast<double>(above) / n;
    TailPoint pt{lam, p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(), false};
    pt.in_fit = p > 0.0 && lam >= q_lo && lam <= q_hi;
    if (pt.in_fit) {
      xs.push_back(-lam * lam);
      ys.push_back(pt.log_survival);
    }
    fit.points.push_back(pt);
  }
  if (xs.size() < 2) throw DomainError("tail fit needs at least two lambdas in the central range");

  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.c = sxy / sxx;
  fit.intercept = my - fit.c * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.c * xs[i]);
    rss += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return fit;
}

}  // namespace shnw
