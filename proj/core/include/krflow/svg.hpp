#ifndef KRFLOW_SVG_HPP
#define KRFLOW_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace krflow::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string label;
    bool points = false; // draw markers instead of a polyline
};

/// Minimal line/scatter plot writer; axes with ticks, labels and a legend.
void write_plot(const std::filesystem::path& path, const std::vector<Series>& series,
                const std::string& x_label, const std::string& y_label,
                const std::string& title);

} // namespace krflow::svg

#endif
