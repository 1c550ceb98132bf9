#pragma once

// Split-diagonal latency heatmaps as SVG. The lower triangle shows one
// model, the upper triangle another, the diagonal is black. Lighter cells
// mean longer delay.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rixp/error.hpp"
#include "rixp/hub.hpp"
#include "rixp/latency.hpp"

namespace rixp {

struct ColorScale {
  double min_ms = 0.0;
  double max_ms = 1.0;
};

struct HeatmapSpec {
  const HubScenario& scenario;
  ModelSelection models;
  ColorScale scale;
  bool cell_labels = true;
};

struct Rgb {
  int r, g, b;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Dark indigo (short delay) to pale yellow (long delay). Every channel
// increases, so luminance is monotone.
inline constexpr Rgb kShortDelayColor{26, 26, 78};
inline constexpr Rgb kLongDelayColor{255, 245, 176};

inline Rgb delay_color(double ms, const ColorScale& scale) {
  double t = (ms - scale.min_ms) / (scale.max_ms - scale.min_ms);
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
  return {lerp(kShortDelayColor.r, kLongDelayColor.r), lerp(kShortDelayColor.g, kLongDelayColor.g),
          lerp(kShortDelayColor.b, kLongDelayColor.b)};
}

inline std::string hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

namespace detail {

inline double max_off_diagonal(const HubScenario& s, ModelId id) {
  const SquareMatrix& d = s.delays(id);
  double hi = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i != j) hi = std::max(hi, d(i, j));
    }
  }
  return hi;
}

}  // namespace detail

// [0, largest off-diagonal delay of either model over all scenarios], so
// brightness compares across candidates.
inline ColorScale shared_scale(const std::vector<HubScenario>& scenarios,
                               const ModelSelection& models) {
  double hi = 0.0;
  for (const auto& s : scenarios) {
    hi = std::max({hi, detail::max_off_diagonal(s, models.bottom),
                   detail::max_off_diagonal(s, models.top)});
  }
  return {0.0, hi};
}

inline ColorScale per_figure_scale(const HubScenario& s, const ModelSelection& models) {
  return {0.0, std::max(detail::max_off_diagonal(s, models.bottom),
                        detail::max_off_diagonal(s, models.top))};
}

inline std::string render_heatmap(const HeatmapSpec& spec) {
  const ColorScale& scale = spec.scale;
  if (!std::isfinite(scale.min_ms) || !std::isfinite(scale.max_ms) ||
      !(scale.max_ms > scale.min_ms)) {
    throw ValidationError("degenerate colour scale: max must exceed min");
  }
  const HubScenario& s = spec.scenario;
  const SquareMatrix& lower = s.delays(spec.models.bottom);
  const SquareMatrix& upper = s.delays(spec.models.top);
  const std::size_t n = s.size();

  constexpr int cell = 80;
  constexpr int left = 60;
  constexpr int top = 90;
  constexpr int legend_gap = 40;
  constexpr int legend_width = 24;
  const int grid = static_cast<int>(n) * cell;
  const int width = left + grid + legend_gap + legend_width + 110;
  const int height = top + grid + 30;

  std::string out;
  char buf[512];
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };

  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\" "
       "font-family=\"sans-serif\">\n",
       width, height, width, height);
  emit("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", width, height);
  emit("<text x=\"%d\" y=\"28\" font-size=\"18\" text-anchor=\"middle\">RIXP in %s latency "
       "heatmap</text>\n",
       width / 2, s.hub.c_str());
  emit("<text x=\"%d\" y=\"50\" font-size=\"12\" text-anchor=\"middle\">lower: %s, upper: %s "
       "(ms)</text>\n",
       width / 2, std::string(model_name(spec.models.bottom)).c_str(),
       std::string(model_name(spec.models.top)).c_str());

  for (std::size_t k = 0; k < n; ++k) {
    const char* weight = s.codes[k] == s.hub ? "bold" : "normal";
    const int centre = static_cast<int>(k) * cell + cell / 2;
    emit("<text class=\"col-header\" x=\"%d\" y=\"%d\" font-size=\"14\" font-weight=\"%s\" "
         "text-anchor=\"middle\">%s</text>\n",
         left + centre, top - 10, weight, s.codes[k].c_str());
    emit("<text class=\"row-header\" x=\"%d\" y=\"%d\" font-size=\"14\" font-weight=\"%s\" "
         "text-anchor=\"end\" dominant-baseline=\"middle\">%s</text>\n",
         left - 10, top + centre, weight, s.codes[k].c_str());
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int x = left + static_cast<int>(j) * cell;
      const int y = top + static_cast<int>(i) * cell;
      if (i == j) {
        emit("<rect class=\"diag\" data-row=\"%s\" data-col=\"%s\" x=\"%d\" y=\"%d\" width=\"%d\" "
             "height=\"%d\" fill=\"#000000\"/>\n",
             s.codes[i].c_str(), s.codes[j].c_str(), x, y, cell, cell);
        continue;
      }
      const bool is_lower = i > j;
      const double v = is_lower ? lower(i, j) : upper(i, j);
      const Rgb c = delay_color(v, scale);
      emit("<rect class=\"%s\" data-row=\"%s\" data-col=\"%s\" x=\"%d\" y=\"%d\" width=\"%d\" "
           "height=\"%d\" fill=\"%s\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n",
           is_lower ? "lower" : "upper", s.codes[i].c_str(), s.codes[j].c_str(), x, y, cell, cell,
           hex(c).c_str());
      if (spec.cell_labels) {
        const double t = (std::clamp(v, scale.min_ms, scale.max_ms) - scale.min_ms) /
                         (scale.max_ms - scale.min_ms);
        emit("<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\" "
             "dominant-baseline=\"middle\" fill=\"%s\">%.2f</text>\n",
             x + cell / 2, y + cell / 2, t > 0.5 ? "#000000" : "#ffffff", v);
      }
    }
  }

  const int lx = left + grid + legend_gap;
  out += "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    emit("<stop offset=\"%.1f\" stop-color=\"%s\"/>\n", t,
         hex(delay_color(scale.min_ms + t * (scale.max_ms - scale.min_ms), scale)).c_str());
  }
  out += "</linearGradient></defs>\n";
  emit("<g class=\"legend\" data-scale-min=\"%.3f\" data-scale-max=\"%.3f\">\n", scale.min_ms,
       scale.max_ms);
  emit("<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"url(#scale)\" "
       "stroke=\"#000000\"/>\n",
       lx, top, legend_width, grid);
  emit("<text x=\"%d\" y=\"%d\" font-size=\"12\" dominant-baseline=\"middle\">%.2f ms</text>\n",
       lx + legend_width + 6, top, scale.max_ms);
  emit("<text x=\"%d\" y=\"%d\" font-size=\"12\" dominant-baseline=\"middle\">%.2f ms</text>\n",
       lx + legend_width + 6, top + grid, scale.min_ms);
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace rixp
