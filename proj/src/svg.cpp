#include "topopc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace topopc {

std::string diagram_to_svg(const PersistenceDiagram& d, int size_px) {
    double max_death = 0.0;
    for (const auto& p : d.pairs) {
        max_death = std::max(max_death, p.birth);
        if (std::isfinite(p.death)) max_death = std::max(max_death, p.death);
    }
    if (max_death <= 0.0) max_death = 1.0;
    const double axis_max = 1.1 * max_death;

    const double margin = 48.0;
    const double gutter = 28.0;  // essential band above the plot
    const double plot = size_px - 2.0 * margin - gutter;
    const double x0 = margin;
    const double y0 = margin + gutter;  // top of the plot area

    auto sx = [&](double v) { return x0 + v / axis_max * plot; };
    auto sy = [&](double v) { return y0 + plot - v / axis_max * plot; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px
        << "\" height=\"" << size_px << "\" viewBox=\"0 0 " << size_px << ' ' << size_px
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(axis_max)
        << "\" y2=\"" << sy(0) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(0)
        << "\" y2=\"" << sy(axis_max) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx(axis_max / 2) << "\" y=\"" << size_px - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">birth</text>\n";
    svg << "<text x=\"14\" y=\"" << sy(axis_max / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << sy(axis_max / 2) << ")\">death</text>\n";

    // diagonal b = d
    svg << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(axis_max)
        << "\" y2=\"" << sy(axis_max) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

    // essential gutter band
    const double band_y = margin;
    svg << "<rect x=\"" << x0 << "\" y=\"" << band_y << "\" width=\"" << plot
        << "\" height=\"" << gutter - 8 << "\" fill=\"#f2f2f2\"/>\n";
    svg << "<text x=\"" << x0 + 4 << "\" y=\"" << band_y + 14
        << "\" font-size=\"10\" fill=\"#666\">death = inf</text>\n";

    for (const auto& p : d.pairs) {
        const double px = sx(p.birth);
        const double py = p.essential || !std::isfinite(p.death)
                              ? band_y + (gutter - 8) / 2.0
                              : sy(p.death);
        if (p.dim == 0) {
            svg << "<circle cx=\"" << px << "\" cy=\"" << py
                << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
        } else {
            svg << "<polygon points=\"" << px << ',' << py - 4.5 << ' ' << px - 4.0 << ','
                << py + 3.5 << ' ' << px + 4.0 << ',' << py + 3.5
                << "\" fill=\"#d62728\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace topopc
