#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace entflow::cli {

struct Series {
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool as_line = false;  // circles otherwise
};

// Self-contained scatter/line plot.
void write_svg_scatter(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

struct HeatCell {
  double x, y, value;
  bool missing = false;
};

// Self-contained cell heatmap with a value label per cell.
void write_svg_heatmap(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<HeatCell>& cells);

}  // namespace entflow::cli
