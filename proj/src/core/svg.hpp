#pragma once

#include <string>
#include <vector>

namespace cavkit {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct HistogramSeries {
    std::string label;
    std::vector<double> edges;   // size = counts.size() + 1
    std::vector<double> counts;
};

// Line chart with axes, ticks and a legend; deterministic output.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series);

// Overlaid translucent histograms sharing one x axis.
std::string render_histogram(const std::string& title, const std::string& x_label,
                             const std::vector<HistogramSeries>& series);

}  // namespace cavkit
