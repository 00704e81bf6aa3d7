#include "irlbfgs/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace irlbfgs {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string legend_label(const RunRecord& rr, std::size_t index) {
  if (const auto* label = kv_find(rr.config, "label")) return *label;
  std::string name = rr.algorithm.empty() ? ("run " + std::to_string(index)) : rr.algorithm;
  if (const auto* g = kv_find(rr.config, "gamma0")) name += " g0=" + *g;
  if (const auto* avg = kv_find(rr.config, "averaged"); avg && *avg == "true") return name + " (mean)";
  return name + " seed=" + std::to_string(rr.seed);
}

std::string ticks_label(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(std::span<const RunRecord> runs, const PlotOptions& opts,
                       std::string* warning) {
  if (runs.empty()) throw std::invalid_argument("render_svg: empty input set");

  bool log_y = opts.log_y;
  double f_min = std::numeric_limits<double>::infinity(), f_max = -f_min;
  long k_max = 1;
  for (const auto& rr : runs)
    for (const auto& rec : rr.records) {
      f_min = std::min(f_min, rec.f);
      f_max = std::max(f_max, rec.f);
      k_max = std::max(k_max, rec.k);
    }
  if (log_y && f_min <= 0.0) {
    log_y = false;
    if (warning != nullptr) *warning = "nonpositive objective values: falling back to linear y";
  }
  if (f_max == f_min) f_max = f_min + 1.0;

  const double margin_l = 70, margin_r = 20, margin_t = 40, margin_b = 50;
  const double w = opts.width - margin_l - margin_r;
  const double h = opts.height - margin_t - margin_b;

  const double y_lo = log_y ? std::log10(f_min) : f_min;
  const double y_hi = log_y ? std::log10(f_max) : f_max;
  auto x_of = [&](long k) { return margin_l + w * static_cast<double>(k) / static_cast<double>(k_max); };
  auto y_of = [&](double f) {
    const double v = log_y ? std::log10(f) : f;
    return margin_t + h * (1.0 - (v - y_lo) / (y_hi - y_lo));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << opts.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << opts.title << "</text>\n";

  // frame
  svg << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\"" << w << "\" height=\""
      << h << "\" fill=\"none\" stroke=\"black\"/>\n";

  // axis ticks
  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double frac = static_cast<double>(t) / n_ticks;
    const long kx = static_cast<long>(frac * static_cast<double>(k_max));
    const double px = x_of(kx);
    svg << "<line x1=\"" << px << "\" y1=\"" << margin_t + h << "\" x2=\"" << px << "\" y2=\""
        << margin_t + h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << margin_t + h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\">" << kx << "</text>\n";

    const double vy = y_lo + frac * (y_hi - y_lo);
    const double py = margin_t + h * (1.0 - frac);
    svg << "<line x1=\"" << margin_l - 5 << "\" y1=\"" << py << "\" x2=\"" << margin_l
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << margin_l - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-size=\"11\">"
        << (log_y ? "1e" + ticks_label(vy) : ticks_label(vy)) << "</text>\n";
  }
  svg << "<text x=\"" << margin_l + w / 2 << "\" y=\"" << opts.height - 10
      << "\" text-anchor=\"middle\" font-size=\"13\">k</text>\n";
  svg << "<text x=\"18\" y=\"" << margin_t + h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << margin_t + h / 2 << ")\">f</text>\n";

  // curves
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& rec : runs[i].records) svg << x_of(rec.k) << ',' << y_of(rec.f) << ' ';
    svg << "\"/>\n";
  }

  // legend
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double ly = margin_t + 16 + 18 * static_cast<double>(i);
    svg << "<line x1=\"" << margin_l + w - 170 << "\" y1=\"" << ly << "\" x2=\""
        << margin_l + w - 146 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << margin_l + w - 140 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">"
        << legend_label(runs[i], i) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace irlbfgs
