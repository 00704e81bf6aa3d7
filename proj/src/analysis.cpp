#include "irlbfgs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irlbfgs {

RateFit rate_fit(std::span<const RunRecord> runs, std::optional<double> fstar, long k_min,
                 double margin_rel) {
  if (runs.empty()) throw std::invalid_argument("rate_fit: no runs supplied");

  double f_min = std::numeric_limits<double>::infinity();
  double f_max = -std::numeric_limits<double>::infinity();
  for (const auto& rr : runs)
    for (const auto& rec : rr.records) {
      f_min = std::min(f_min, rec.f);
      f_max = std::max(f_max, rec.f);
    }

  RateFit fit;
  if (fstar) {
    fit.fstar_used = *fstar;
    fit.fstar_estimated = false;
  } else {
    double margin = margin_rel * (f_max - f_min);
    if (margin <= 0.0) margin = margin_rel * std::max(1.0, std::abs(f_min));
    fit.margin = margin;
    fit.fstar_used = f_min - margin;
    fit.fstar_estimated = true;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  const long lo = std::max(k_min, 1L);
  for (const auto& rr : runs)
    for (const auto& rec : rr.records) {
      if (rec.k < lo) continue;
      const double gap = rec.f - fit.fstar_used;
      if (!(gap > 0.0))
        throw std::domain_error("rate_fit: nonpositive gap at k = " + std::to_string(rec.k) +
                                " (f* too high)");
      const double x = std::log(static_cast<double>(rec.k));
      const double y = std::log(gap);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  if (count < 10)
    throw std::invalid_argument("rate_fit: need at least 10 logged points with k >= k_min, got " +
                                std::to_string(count));

  const double nd = static_cast<double>(count);
  const double denom = nd * sxx - sx * sx;
  if (denom == 0.0) throw std::domain_error("rate_fit: degenerate abscissa (single k value)");
  fit.slope = (nd * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / nd;
  fit.points = count;
  return fit;
}

std::vector<std::pair<long, double>> mean_objective_curve(std::span<const RunRecord> runs) {
  if (runs.empty()) throw std::invalid_argument("mean_objective_curve: no runs");
  const auto& grid = runs.front().records;
  for (const auto& rr : runs) {
    if (rr.records.size() != grid.size())
      throw std::invalid_argument("mean_objective_curve: runs logged on different grids");
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (rr.records[i].k != grid[i].k)
        throw std::invalid_argument("mean_objective_curve: runs logged on different grids");
  }
  std::vector<std::pair<long, double>> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (const auto& rr : runs) acc += rr.records[i].f;
    out.emplace_back(grid[i].k, acc / static_cast<double>(runs.size()));
  }
  return out;
}

}  // namespace irlbfgs
