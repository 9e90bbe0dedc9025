#pragma once

// minimal SVG line-plot emitter for CLI output files
#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace seis::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

inline void write_plot(const std::string& path, const std::vector<Series>& series,
                       const std::string& xlabel, const std::string& ylabel, bool log_x = false) {
    const int W = 720, H = 480, ML = 70, MR = 20, MT = 20, MB = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double v) { return ML + (tx(v) - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ofstream os(path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='" << H - MB
       << "' stroke='black'/>\n";
    os << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
       << "' stroke='black'/>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
    for (int k = 0; k <= 4; ++k) {
        double xv = xmin + (xmax - xmin) * k / 4.0;
        double yv = ymin + (ymax - ymin) * k / 4.0;
        double xs = ML + (W - ML - MR) * k / 4.0;
        double ys = H - MB - (H - MT - MB) * k / 4.0;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", log_x ? std::pow(10.0, xv) : xv);
        os << "<text x='" << xs << "' y='" << H - MB + 18 << "' font-size='11' text-anchor='middle'>"
           << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", yv);
        os << "<text x='" << ML - 6 << "' y='" << ys + 4 << "' font-size='11' text-anchor='end'>"
           << buf << "</text>\n";
    }
    os << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 10
       << "' font-size='13' text-anchor='middle'>" << xlabel << "</text>\n";
    os << "<text x='14' y='" << (MT + H - MB) / 2 << "' font-size='13' text-anchor='middle' "
       << "transform='rotate(-90 14 " << (MT + H - MB) / 2 << ")'>" << ylabel << "</text>\n";
    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 5];
        os << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        os << "'/>\n";
        for (size_t i = 0; i < s.x.size(); ++i)
            os << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i]) << "' r='2.5' fill='"
               << col << "'/>\n";
        if (!s.label.empty())
            os << "<text x='" << W - MR - 6 << "' y='" << MT + 16 + 16 * ci
               << "' font-size='12' text-anchor='end' fill='" << col << "'>" << s.label
               << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
}

}  // namespace seis::svg
