// Minimal self-contained SVG line/scatter charts; enough for quick looks
// at trajectories, boundaries, potentials and spectra without an external
// plotting dependency.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace xp2::io {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool scatter = false;
};

namespace detail {
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}
}  // namespace detail

inline void write_svg_plot(std::ostream& os, const std::string& title,
                           const std::vector<Series>& series) {
    const int width = 760, height = 520;
    const double ml = 70, mr = 25, mt = 45, mb = 55;  // margins

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x); x1 = std::max(x1, x);
            y0 = std::min(y0, y); y1 = std::max(y1, y);
        }
    if (!(x0 < x1)) { x0 -= 1.0; x1 += 1.0; }
    if (!(y0 < y1)) { y0 -= 1.0; y1 += 1.0; }
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;

    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (width - ml - mr)
       << "\" height=\"" << (height - mt - mb)
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5.0;
        const double yv = y0 + (y1 - y0) * i / 5.0;
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << height - mb << "\" x2=\"" << px(xv)
           << "\" y2=\"" << height - mb + 5 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 20
           << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::fmt(xv) << "</text>\n";
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
           << py(yv) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << detail::fmt(yv) << "</text>\n";
    }

    int color = 0;
    double legend_y = mt + 16;
    for (const auto& s : series) {
        const char* col = palette[color % 5];
        if (s.scatter) {
            for (auto [x, y] : s.points)
                os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
                   << "\" r=\"3\" fill=\"" << col << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
            for (auto [x, y] : s.points) os << px(x) << "," << py(y) << " ";
            os << "\"/>\n";
        }
        if (!s.label.empty()) {
            os << "<rect x=\"" << width - mr - 150 << "\" y=\"" << legend_y - 9
               << "\" width=\"12\" height=\"3\" fill=\"" << col << "\"/>\n";
            os << "<text x=\"" << width - mr - 132 << "\" y=\"" << legend_y
               << "\" font-size=\"12\">" << s.label << "</text>\n";
            legend_y += 16;
        }
        ++color;
    }
    os << "</svg>\n";
}

}  // namespace xp2::io
