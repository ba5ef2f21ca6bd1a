#pragma once

#include <string>
#include <vector>

#include "ouq/core/simplex.hpp"
#include "ouq/stats/report.hpp"

namespace ouq::render {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartLabels {
    std::string title;
    std::string x_axis;
    std::string y_axis;
};

std::string line_chart_svg(const std::vector<Series>& series, const ChartLabels& labels);

/// Triangle heatmap of a K=3 lattice produced by simplex_heatmap.
std::string simplex_heatmap_svg(const std::vector<HeatmapCell>& cells, double grid_step, const std::string& title);

/// Average ranks on a horizontal axis with bars joining groups that are not
/// significantly different.
std::string cd_diagram_svg(const stats::TestReport& report, const std::string& title);

} // namespace ouq::render
