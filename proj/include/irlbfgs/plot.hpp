#pragma once

#include <span>
#include <string>

#include "irlbfgs/records.hpp"

namespace irlbfgs {

struct PlotOptions {
  std::string title = "objective";
  bool log_y = true;  // falls back to linear (with a warning) on nonpositive f
  int width = 960;
  int height = 600;
};

// Static SVG: one curve per run, x = iteration, y = objective, legend from
// run metadata. Returns the document; a non-null `warning` receives a message
// when the log-y request had to be dropped.
std::string render_svg(std::span<const RunRecord> runs, const PlotOptions& opts,
                       std::string* warning = nullptr);

}  // namespace irlbfgs
