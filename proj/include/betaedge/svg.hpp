#pragma once

#include "betaedge/config.hpp"
#include "betaedge/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace betaedge {

inline constexpr double histogram_bin_width = 0.25;

struct HistogramPanel {
    std::string title;
    Interval window;
    std::vector<double> points; // pooled over replicas
    std::size_t replicas = 1;
    Intensity limit;                     // overlaid solid
    std::optional<Intensity> finite_n;   // overlaid dashed
};

struct Histogram {
    double lo = 0;
    std::vector<double> heights; // points per replica per unit length
    std::vector<double> errors;
};

inline Histogram make_histogram(const HistogramPanel& p) {
    Histogram h;
    h.lo = p.window.lo;
    const auto bins = static_cast<std::size_t>(std::ceil((p.window.hi - p.window.lo) / histogram_bin_width - 1e-9));
    std::vector<double> counts(bins, 0.0);
    for (double x : p.points) {
        if (x < p.window.lo || x > p.window.hi) continue;
        auto b = static_cast<std::size_t>((x - p.window.lo) / histogram_bin_width);
        counts[std::min(b, bins - 1)] += 1.0;
    }
    const double norm = static_cast<double>(std::max<std::size_t>(1, p.replicas)) * histogram_bin_width;
    for (double c : counts) {
        h.heights.push_back(c / norm);
        h.errors.push_back(std::sqrt(c) / norm);
    }
    return h;
}

// Side-by-side histograms with intensity overlays. Fixed geometry, no
// timestamps, so identical inputs give identical bytes.
inline std::string render_svg(const std::vector<HistogramPanel>& panels) {
    const double pw = 420, ph = 300, ml = 50, mr = 15, mt = 30, mb = 40;
    const double width = std::max<std::size_t>(1, panels.size()) * pw;
    auto f = [](double v) { return format_double(v); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(width) << "\" height=\"" << f(ph)
      << "\" viewBox=\"0 0 " << f(width) << " " << f(ph) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto& p = panels[i];
        const auto h = make_histogram(p);
        const double x0 = i * pw + ml, x1 = (i + 1) * pw - mr, y0 = ph - mb, y1 = mt;
        double ymax = 0;
        for (std::size_t b = 0; b < h.heights.size(); ++b) ymax = std::max(ymax, h.heights[b] + h.errors[b]);
        for (int s = 0; s <= 200; ++s) {
            double x = p.window.lo + (p.window.hi - p.window.lo) * s / 200.0;
            ymax = std::max(ymax, p.limit.density(x));
        }
        if (!(ymax > 0)) ymax = 1;
        ymax *= 1.05;
        auto X = [&](double x) { return x0 + (x - p.window.lo) / (p.window.hi - p.window.lo) * (x1 - x0); };
        auto Y = [&](double y) { return y0 - std::min(y, ymax) / ymax * (y0 - y1); };
        o << "<g id=\"panel" << i << "\">\n";
        o << "<text x=\"" << f(x0) << "\" y=\"18\">" << p.title << "</text>\n";
        for (std::size_t b = 0; b < h.heights.size(); ++b) {
            const double lo = p.window.lo + b * histogram_bin_width;
            const double hi = std::min(p.window.hi, lo + histogram_bin_width);
            o << "<rect x=\"" << f(X(lo)) << "\" y=\"" << f(Y(h.heights[b])) << "\" width=\"" << f(X(hi) - X(lo))
              << "\" height=\"" << f(y0 - Y(h.heights[b])) << "\" fill=\"#9ab\" stroke=\"#567\" stroke-width=\"0.5\"/>\n";
            if (h.heights[b] > 0) {
                const double xm = X(0.5 * (lo + hi));
                o << "<line x1=\"" << f(xm) << "\" y1=\"" << f(Y(h.heights[b] - h.errors[b])) << "\" x2=\"" << f(xm)
                  << "\" y2=\"" << f(Y(h.heights[b] + h.errors[b])) << "\" stroke=\"#234\" stroke-width=\"0.8\"/>\n";
            }
        }
        auto curve = [&](const Intensity& in, const char* style) {
            o << "<polyline fill=\"none\" " << style << " points=\"";
            for (int s = 0; s <= 200; ++s) {
                double x = p.window.lo + (p.window.hi - p.window.lo) * s / 200.0;
                o << (s ? " " : "") << f(X(x)) << "," << f(Y(in.density(x)));
            }
            o << "\"/>\n";
        };
        curve(p.limit, "stroke=\"#c33\" stroke-width=\"1.5\"");
        if (p.finite_n) curve(*p.finite_n, "stroke=\"#333\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
        o << "<line x1=\"" << f(x0) << "\" y1=\"" << f(y0) << "\" x2=\"" << f(x1) << "\" y2=\"" << f(y0) << "\" stroke=\"black\"/>\n";
        o << "<line x1=\"" << f(x0) << "\" y1=\"" << f(y0) << "\" x2=\"" << f(x0) << "\" y2=\"" << f(y1) << "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double xv = p.window.lo + (p.window.hi - p.window.lo) * t / 4.0;
            o << "<text x=\"" << f(X(xv)) << "\" y=\"" << f(y0 + 14) << "\" text-anchor=\"middle\">" << f(xv) << "</text>\n";
            const double yv = ymax * t / 4.0;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", yv);
            o << "<text x=\"" << f(x0 - 4) << "\" y=\"" << f(Y(yv) + 4) << "\" text-anchor=\"end\">" << buf << "</text>\n";
        }
        o << "<text x=\"" << f(0.5 * (x0 + x1)) << "\" y=\"" << f(ph - 8) << "\" text-anchor=\"middle\">a_n(lambda - b_n)</text>\n";
        o << "</g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace betaedge
