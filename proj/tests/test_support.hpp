/*
   Copyright 2026 The v2xsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Test-only oracles. These deliberately avoid the library's geometry code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "v2xsim/geometry.hpp"

namespace v2x::testing {

/// Strict point-in-convex-polygon by edge sign test (ray-independent).
inline bool strictly_inside(const BuildingFootprint& b, Point2D p, double eps = 1e-9)
{
    const auto n = b.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = b.vertices[i];
        const auto& c = b.vertices[(i + 1) % n];
        const double ex = c.x - a.x;
        const double ey = c.y - a.y;
        const double len = std::hypot(ex, ey);
        if ((ex * (p.y - a.y) - ey * (p.x - a.x)) / len <= eps) {
            return false;
        }
    }
    return true;
}

/// Sampling oracle: blocked iff any of `samples` evenly spaced interior points
/// of the segment lies strictly inside a building.
inline bool sampled_los_clear(Point2D p, Point2D q, const std::vector<BuildingFootprint>& buildings,
                              int samples = 10000)
{
    for (int k = 1; k <= samples; ++k) {
        const double t = static_cast<double>(k) / (samples + 1);
        const Point2D s{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
        for (const auto& b : buildings) {
            if (strictly_inside(b, s)) {
                return false;
            }
        }
    }
    return true;
}

/// Polygon from a road segment inflated by half its width on each side.
inline std::vector<Point2D> road_rectangle(const RoadSegment& s)
{
    const double dx = s.end.x - s.start.x;
    const double dy = s.end.y - s.start.y;
    const double len = std::hypot(dx, dy);
    const double nx = -dy / len * s.width / 2;
    const double ny = dx / len * s.width / 2;
    return {{s.start.x - nx, s.start.y - ny}, {s.end.x - nx, s.end.y - ny},
            {s.end.x + nx, s.end.y + ny}, {s.start.x + nx, s.start.y + ny}};
}

/// Separating-axis test: true iff the convex polygons share interior area.
inline bool convex_interiors_overlap(const std::vector<Point2D>& a, const std::vector<Point2D>& b,
                                     double eps = 1e-9)
{
    auto separated_on_edges_of = [&](const std::vector<Point2D>& poly) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& p = poly[i];
            const auto& q = poly[(i + 1) % poly.size()];
            const double ax = -(q.y - p.y);
            const double ay = q.x - p.x;
            const double len = std::hypot(ax, ay);
            auto project = [&](const std::vector<Point2D>& pts, double& lo, double& hi) {
                lo = std::numeric_limits<double>::infinity();
                hi = -lo;
                for (const auto& v : pts) {
                    const double d = (v.x * ax + v.y * ay) / len;
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
            };
            double alo, ahi, blo, bhi;
            project(a, alo, ahi);
            project(b, blo, bhi);
            if (std::min(ahi, bhi) - std::max(alo, blo) <= eps) {
                return true;
            }
        }
        return false;
    };
    return !separated_on_edges_of(a) && !separated_on_edges_of(b);
}

/// One-sample Kolmogorov-Smirnov statistic against Uniform(0, upper).
inline double ks_uniform(std::vector<double> xs, double upper)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = xs[i] / upper;
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Pearson chi-square statistic for counts against equal expected frequencies.
inline double chi_square_uniform(const std::vector<std::size_t>& counts)
{
    double total = 0.0;
    for (auto c : counts) {
        total += static_cast<double>(c);
    }
    const double expected = total / static_cast<double>(counts.size());
    double chi = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi += d * d / expected;
    }
    return chi;
}

} // namespace v2x::testing
