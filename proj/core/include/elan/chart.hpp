#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elan/trajectory.hpp"

namespace elan {

struct ChartStyle {
  std::string extent_color = "#1f77b4";  // min and max series
  std::string mean_color = "#d62728";    // mean series
  int width = 640;
  int height = 420;
};

// Renders one role's trajectory as a deterministic standalone SVG: three
// polylines (min, max, mean) over turn index, y-axis fixed to [-1, 1].
// x_start shifts the x-axis tick labels without moving the data (the first
// plotted point is labeled x_start). When smoothed_mean is provided it is
// drawn as a dashed overlay. manifest_digest, when non-empty, is embedded as
// an XML comment so outputs carry their provenance.
std::string trajectory_chart_svg(
    const TrajectorySummary& summary, const std::string& title,
    const ChartStyle& style = {}, int x_start = 0,
    const std::optional<std::vector<double>>& smoothed_mean = std::nullopt,
    const std::string& manifest_digest = "");

}  // namespace elan
