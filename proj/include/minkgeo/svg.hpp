#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "minkgeo/csv.hpp"
#include "minkgeo/errors.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// Write-only SVG line plots; presentation output, never parsed back.
class SvgPlot {
public:
    SvgPlot(double width, double height) : w_(width), h_(height) {}

    void add_curve(const std::vector<Vec2>& pts, const std::string& color, double stroke = 1.0) {
        curves_.push_back({pts, color, stroke});
        for (const Vec2& p : pts) {
            xmin_ = std::min(xmin_, p.x);
            xmax_ = std::max(xmax_, p.x);
            ymin_ = std::min(ymin_, p.y);
            ymax_ = std::max(ymax_, p.y);
        }
    }

    void add_series(const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& color, double stroke = 1.0) {
        std::vector<Vec2> pts;
        pts.reserve(x.size());
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) pts.push_back({x[i], y[i]});
        add_curve(pts, color, stroke);
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw InvalidParameter("cannot open for writing: " + path);
        const double margin = 20.0;
        const double sx = (w_ - 2 * margin) / std::max(xmax_ - xmin_, 1e-12);
        const double sy = (h_ - 2 * margin) / std::max(ymax_ - ymin_, 1e-12);
        const double scale = std::min(sx, sy);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
            << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        for (const auto& c : curves_) {
            out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\""
                << c.stroke << "\" points=\"";
            for (const Vec2& p : c.pts) {
                const double px = margin + (p.x - xmin_) * scale;
                const double py = h_ - margin - (p.y - ymin_) * scale;
                out << format_double(px) << "," << format_double(py) << " ";
            }
            out << "\"/>\n";
        }
        out << "</svg>\n";
    }

private:
    struct Curve {
        std::vector<Vec2> pts;
        std::string color;
        double stroke;
    };
    double w_, h_;
    double xmin_ = 1e300, xmax_ = -1e300, ymin_ = 1e300, ymax_ = -1e300;
    std::vector<Curve> curves_;
};

} // namespace minkgeo
