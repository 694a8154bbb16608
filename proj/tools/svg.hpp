#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fractrunc::cli {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<std::optional<double>> y;  // gaps break the polyline
};

// A self-contained SVG 1.1 line chart: frame, ticks, one polyline per series
// and a legend.
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::vector<Series>& series);

std::string xml_escape(const std::string& s);

}  // namespace fractrunc::cli
