#include "krflow/svg.hpp"
#include "krflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace krflow::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 55.0;

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(5);
    ss << v;
    return ss.str();
}

} // namespace

void write_plot(const std::filesystem::path& path, const std::vector<Series>& series,
                const std::string& x_label, const std::string& y_label,
                const std::string& title) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series) {
        for (double v : s.x) {
            xlo = std::min(xlo, v);
            xhi = std::max(xhi, v);
        }
        for (double v : s.y) {
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    }
    if (!(xhi > xlo)) xhi = xlo + 1.0;
    if (!(yhi > ylo)) yhi = ylo + 1.0;
    const double xpad = 0.04 * (xhi - xlo);
    const double ypad = 0.07 * (yhi - ylo);
    xlo -= xpad;
    xhi += xpad;
    ylo -= ypad;
    yhi += ypad;

    auto px = [&](double x) {
        return kMarginL + (x - xlo) / (xhi - xlo) * (kWidth - kMarginL - kMarginR);
    };
    auto py = [&](double y) {
        return kHeight - kMarginB - (y - ylo) / (yhi - ylo) * (kHeight - kMarginT - kMarginB);
    };

    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";

    // Axes and ticks.
    out << "<line x1='" << kMarginL << "' y1='" << kHeight - kMarginB << "' x2='"
        << kWidth - kMarginR << "' y2='" << kHeight - kMarginB << "' stroke='black'/>\n";
    out << "<line x1='" << kMarginL << "' y1='" << kMarginT << "' x2='" << kMarginL << "' y2='"
        << kHeight - kMarginB << "' stroke='black'/>\n";
    const int nticks = 6;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xlo + (xhi - xlo) * i / nticks;
        const double fy = ylo + (yhi - ylo) * i / nticks;
        out << "<line x1='" << px(fx) << "' y1='" << kHeight - kMarginB << "' x2='" << px(fx)
            << "' y2='" << kHeight - kMarginB + 5 << "' stroke='black'/>\n";
        out << "<text x='" << px(fx) << "' y='" << kHeight - kMarginB + 20
            << "' text-anchor='middle' font-size='11'>" << fmt(fx) << "</text>\n";
        out << "<line x1='" << kMarginL - 5 << "' y1='" << py(fy) << "' x2='" << kMarginL
            << "' y2='" << py(fy) << "' stroke='black'/>\n";
        out << "<text x='" << kMarginL - 8 << "' y='" << py(fy) + 4
            << "' text-anchor='end' font-size='11'>" << fmt(fy) << "</text>\n";
    }
    out << "<text x='" << (kMarginL + kWidth - kMarginR) / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
    out << "<text x='18' y='" << (kMarginT + kHeight - kMarginB) / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
        << (kMarginT + kHeight - kMarginB) / 2 << ")'>" << y_label << "</text>\n";

    double legend_y = kMarginT + 10.0;
    for (const auto& s : series) {
        if (s.points) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
                    << "' r='3' fill='" << s.color << "'/>\n";
            }
        } else {
            out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << px(s.x[i]) << "," << py(s.y[i]) << " ";
            }
            out << "'/>\n";
        }
        if (!s.label.empty()) {
            out << "<rect x='" << kWidth - kMarginR - 180 << "' y='" << legend_y - 9
                << "' width='12' height='12' fill='" << s.color << "'/>\n";
            out << "<text x='" << kWidth - kMarginR - 163 << "' y='" << legend_y + 2
                << "' font-size='12'>" << s.label << "</text>\n";
            legend_y += 18.0;
        }
    }
    out << "</svg>\n";
}

} // namespace krflow::svg
