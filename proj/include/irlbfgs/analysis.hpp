#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "irlbfgs/records.hpp"

namespace irlbfgs {

struct RateFit {
  double slope = 0.0;      // least-squares slope of log(f - f*) against log k
  double intercept = 0.0;
  std::size_t points = 0;
  double fstar_used = 0.0;
  bool fstar_estimated = false;
  double margin = 0.0;  // subtracted below the observed minimum when estimating
};

// Fits log(f_k - f*) ~ slope * log k + intercept over all logged points with
// k >= max(k_min, 1). When fstar is empty, f* is estimated as the minimum
// observed value across all runs minus margin_rel * (observed range).
// Throws std::invalid_argument with fewer than 10 usable points and
// std::domain_error when any gap is nonpositive.
RateFit rate_fit(std::span<const RunRecord> runs, std::optional<double> fstar, long k_min,
                 double margin_rel = 1e-3);

// Mean objective across runs at matching k. All runs must be logged on the
// identical k grid; the result is independent of run ordering.
std::vector<std::pair<long, double>> mean_objective_curve(std::span<const RunRecord> runs);

}  // namespace irlbfgs
