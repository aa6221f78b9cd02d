#pragma once

// Minimal SVG scatter plots for workspace projections and posture
// sketches.  Fixed canvas, fixed precision, no timestamps: outputs are
// diffable goldens.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "karo/kinematics.hpp"

namespace karo::svg {

inline constexpr int kCanvas = 480;
inline constexpr int kMarginPx = 40;

struct Projection {
    std::string name;    // "front", "left", "top"
    std::string haxis;   // label of the horizontal data axis
    std::string vaxis;
    // Extract (h, v) data coordinates from a 3D point.
    double (*h)(const Vec3&);
    double (*v)(const Vec3&);
};

// Panel layout: front view (y-z), left view (x-z), top view (x-y).
inline std::vector<Projection> workspace_projections() {
    return {
        {"front", "y [m]", "z [m]", [](const Vec3& p) { return p.y; }, [](const Vec3& p) { return p.z; }},
        {"left", "x [m]", "z [m]", [](const Vec3& p) { return p.x; }, [](const Vec3& p) { return p.z; }},
        {"top", "x [m]", "y [m]", [](const Vec3& p) { return p.x; }, [](const Vec3& p) { return p.y; }},
    };
}

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string scatter_svg(const std::vector<Vec3>& points, const Projection& proj,
                               const std::string& title) {
    double hmin = 1e30, hmax = -1e30, vmin = 1e30, vmax = -1e30;
    for (const auto& p : points) {
        hmin = std::min(hmin, proj.h(p));
        hmax = std::max(hmax, proj.h(p));
        vmin = std::min(vmin, proj.v(p));
        vmax = std::max(vmax, proj.v(p));
    }
    if (points.empty()) hmin = vmin = -1.0, hmax = vmax = 1.0;
    double span = std::max({hmax - hmin, vmax - vmin, 1e-6});
    double scale = double(kCanvas - 2 * kMarginPx) / span;
    auto px = [&](double h) { return kMarginPx + (h - hmin) * scale; };
    auto py = [&](double v) { return kCanvas - kMarginPx - (v - vmin) * scale; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
       << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n";
    os << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kCanvas / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<text x=\"" << kCanvas / 2 << "\" y=\"" << kCanvas - 8
       << "\" text-anchor=\"middle\" font-size=\"11\">" << proj.haxis << " ["
       << fmt2(hmin) << ", " << fmt2(hmax) << "]</text>\n";
    os << "<text x=\"14\" y=\"" << kCanvas / 2
       << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 14 " << kCanvas / 2
       << ")\">" << proj.vaxis << " [" << fmt2(vmin) << ", " << fmt2(vmax) << "]</text>\n";
    os << "<g fill=\"#1f77b4\" fill-opacity=\"0.25\">\n";
    for (const auto& p : points)
        os << "<circle cx=\"" << fmt2(px(proj.h(p))) << "\" cy=\"" << fmt2(py(proj.v(p)))
           << "\" r=\"1\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

inline std::string cloud_csv(const WorkspaceCloud& cloud) {
    std::ostringstream os;
    os << "x_m,y_m,z_m\n";
    os.precision(9);
    for (const auto& p : cloud.points) os << p.x << "," << p.y << "," << p.z << "\n";
    return os.str();
}

// Side-view sketch of a posture sequence: chassis segment plus flipper
// levers for each posture, staggered vertically.
inline std::string posture_sketch_svg(const std::vector<std::pair<std::string, double>>& postures,
                                      double la, double lb, const std::string& title) {
    std::ostringstream os;
    int rows = std::max<size_t>(postures.size(), 1);
    int row_h = 90;
    int height = 40 + rows * row_h;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << kCanvas << " " << height << "\">\n";
    os << "<rect width=\"" << kCanvas << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kCanvas / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    double scale = 150.0;
    for (size_t i = 0; i < postures.size(); ++i) {
        double cy = 40 + double(i) * row_h + row_h / 2.0;
        double cx = kCanvas / 2.0;
        double pitch = postures[i].second;
        double dx = std::cos(pitch), dz = std::sin(pitch);
        auto X = [&](double s) { return cx + s * dx * scale; };
        auto Y = [&](double s) { return cy - s * dz * scale; };
        os << "<line x1=\"" << fmt2(X(-la)) << "\" y1=\"" << fmt2(Y(-la)) << "\" x2=\""
           << fmt2(X(la)) << "\" y2=\"" << fmt2(Y(la))
           << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
        os << "<line x1=\"" << fmt2(X(la)) << "\" y1=\"" << fmt2(Y(la)) << "\" x2=\""
           << fmt2(X(la + lb)) << "\" y2=\"" << fmt2(Y(la + lb))
           << "\" stroke=\"#d62728\" stroke-width=\"3\"/>\n";
        os << "<line x1=\"" << fmt2(X(-la)) << "\" y1=\"" << fmt2(Y(-la)) << "\" x2=\""
           << fmt2(X(-la - lb)) << "\" y2=\"" << fmt2(Y(-la - lb))
           << "\" stroke=\"#d62728\" stroke-width=\"3\"/>\n";
        os << "<text x=\"10\" y=\"" << fmt2(cy) << "\" font-size=\"11\">" << postures[i].first
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace karo::svg
