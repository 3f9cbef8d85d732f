#include "elan/chart.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "elan/errors.hpp"

namespace elan {

namespace {

constexpr int kMarginLeft = 56;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 44;

std::string format_coord(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

class PlotFrame {
 public:
  PlotFrame(const ChartStyle& style, std::size_t point_count)
      : width_(style.width),
        height_(style.height),
        points_(point_count) {}

  double x(std::size_t index) const {
    const double plot_width =
        static_cast<double>(width_ - kMarginLeft - kMarginRight);
    if (points_ <= 1) return kMarginLeft + plot_width / 2.0;
    return kMarginLeft + plot_width * static_cast<double>(index) /
                             static_cast<double>(points_ - 1);
  }

  // y-range is fixed to [-1, 1] for comparability across charts.
  double y(double energy) const {
    const double plot_height =
        static_cast<double>(height_ - kMarginTop - kMarginBottom);
    const double clamped = std::clamp(energy, -1.0, 1.0);
    return kMarginTop + plot_height * (1.0 - clamped) / 2.0;
  }

 private:
  int width_;
  int height_;
  std::size_t points_;
};

std::string polyline(const PlotFrame& frame, const std::vector<double>& values,
                     const std::string& color, const char* dash) {
  std::string points;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!points.empty()) points += ' ';
    points += format_coord(frame.x(i));
    points += ',';
    points += format_coord(frame.y(values[i]));
  }
  std::string element = "  <polyline fill=\"none\" stroke=\"" + color +
                        "\" stroke-width=\"2\"";
  if (dash != nullptr) {
    element += " stroke-dasharray=\"";
    element += dash;
    element += "\"";
  }
  element += " points=\"" + points + "\"/>\n";
  return element;
}

}  // namespace

std::string trajectory_chart_svg(
    const TrajectorySummary& summary, const std::string& title,
    const ChartStyle& style, int x_start,
    const std::optional<std::vector<double>>& smoothed_mean,
    const std::string& manifest_digest) {
  const std::size_t n = summary.per_index_mean.size();
  if (n == 0) {
    throw EmptyInputError("chart needs at least one data point");
  }
  const PlotFrame frame(style, n);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(style.width) + "\" height=\"" +
         std::to_string(style.height) + "\" viewBox=\"0 0 " +
         std::to_string(style.width) + " " + std::to_string(style.height) +
         "\">\n";
  if (!manifest_digest.empty()) {
    svg += "  <!-- manifest sha256: " + manifest_digest + " -->\n";
  }
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "  <title>" + escape_xml(title) + "</title>\n";
  svg += "  <text x=\"" + std::to_string(style.width / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" +
         escape_xml(title) + "</text>\n";

  // Horizontal grid lines and y labels at -1, -0.5, 0, 0.5, 1.
  for (int step = -2; step <= 2; ++step) {
    const double energy = step / 2.0;
    const std::string y = format_coord(frame.y(energy));
    const bool axis = step == 0;
    svg += "  <line x1=\"" + std::to_string(kMarginLeft) + "\" y1=\"" + y +
           "\" x2=\"" + std::to_string(style.width - kMarginRight) +
           "\" y2=\"" + y + "\" stroke=\"" +
           std::string(axis ? "#888888" : "#dddddd") + "\"/>\n";
    svg += "  <text x=\"" + std::to_string(kMarginLeft - 8) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"11\">" +
           format_coord(energy) + "</text>\n";
  }

  // X ticks, labeled from x_start upward.
  for (std::size_t i = 0; i < n; ++i) {
    const std::string x = format_coord(frame.x(i));
    const std::string base =
        std::to_string(style.height - kMarginBottom);
    svg += "  <line x1=\"" + x + "\" y1=\"" + base + "\" x2=\"" + x +
           "\" y2=\"" +
           std::to_string(style.height - kMarginBottom + 5) +
           "\" stroke=\"#888888\"/>\n";
    svg += "  <text x=\"" + x + "\" y=\"" +
           std::to_string(style.height - kMarginBottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           std::to_string(x_start + static_cast<int>(i)) + "</text>\n";
  }

  svg += polyline(frame, summary.per_index_min, style.extent_color, nullptr);
  svg += polyline(frame, summary.per_index_max, style.extent_color, nullptr);
  svg += polyline(frame, summary.per_index_mean, style.mean_color, nullptr);
  if (smoothed_mean && smoothed_mean->size() == n) {
    svg += polyline(frame, *smoothed_mean, style.mean_color, "6,4");
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace elan
