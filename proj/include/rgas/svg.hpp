#pragma once

#include <string>
#include <vector>

namespace rgas {

/// Minimal polyline chart writer (no plotting dependency; outputs are batch
/// figures). Each series is drawn as a polyline with circle markers and
/// optional symmetric error bars.
struct ChartSeries {
    std::string name;
    std::vector<double> x, y;
    std::vector<double> y_err; // empty: no error bars
    std::string color = "#1f77b4";
};

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<ChartSeries>& series,
                          bool log_x = false);

} // namespace rgas
