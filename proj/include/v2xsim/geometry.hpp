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

// Road scenes, vehicle placement and line-of-sight blockage.
//
// All roads are reduced to straight centerline segments. A "road" is a run of
// consecutive segments sharing the same road id (a straight arm is one
// segment, a cloverleaf ramp is a chordal polyline). Coordinates are meters
// with the scene centered on the origin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "v2xsim/errors.hpp"
#include "v2xsim/random.hpp"

namespace v2x {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2D operator*(Point2D a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr Point2D operator*(double s, Point2D a) { return {a.x * s, a.y * s}; }
    friend constexpr bool operator==(Point2D, Point2D) = default;
};

constexpr double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2D a) { return std::hypot(a.x, a.y); }
inline double distance(Point2D a, Point2D b) { return norm(b - a); }

struct RoadSegment {
    std::size_t id = 0;
    std::size_t road = 0; ///< segments of one road are stored contiguously, in travel order
    Point2D start;
    Point2D end;
    double width = 0.0;

    double length() const { return distance(start, end); }
    Point2D direction() const { return (end - start) * (1.0 / length()); }
    /// Left-hand unit normal.
    Point2D normal() const
    {
        const auto d = direction();
        return {-d.y, d.x};
    }
    Point2D at(double arc, double lateral = 0.0) const
    {
        return start + direction() * arc + normal() * lateral;
    }
};

/// Perpendicular distance from p to the segment's centerline (clamped to the segment).
inline double distance_to_centerline(const RoadSegment& s, Point2D p)
{
    const auto d = s.end - s.start;
    const double t = std::clamp(dot(p - s.start, d) / dot(d, d), 0.0, 1.0);
    return distance(p, s.start + d * t);
}

struct RoadNetwork {
    std::vector<RoadSegment> segments;
    double region_side = 0.0; ///< square region centered on the origin
    double total_centerline_length = 0.0;

    double region_area_km2() const { return region_side * region_side * 1e-6; }

    /// Index range [first, last) of the segments belonging to the road of segment `seg`.
    std::pair<std::size_t, std::size_t> road_range(std::size_t seg) const
    {
        const auto road = segments.at(seg).road;
        std::size_t first = seg;
        while (first > 0 && segments[first - 1].road == road) {
            --first;
        }
        std::size_t last = seg + 1;
        while (last < segments.size() && segments[last].road == road) {
            ++last;
        }
        return {first, last};
    }

    std::size_t road_count() const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (i == 0 || segments[i].road != segments[i - 1].road) {
                ++n;
            }
        }
        return n;
    }
};

/// Convex polygon with counter-clockwise vertices.
struct BuildingFootprint {
    std::vector<Point2D> vertices;

    double signed_area() const
    {
        double a = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            a += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
        }
        return 0.5 * a;
    }

    /// Throws InvalidScene unless the polygon has >= 3 finite vertices, is
    /// strictly convex, counter-clockwise and has positive area.
    void validate() const
    {
        const auto n = vertices.size();
        if (n < 3) {
            throw InvalidScene("building footprint needs at least 3 vertices");
        }
        for (const auto& v : vertices) {
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
                throw InvalidScene("building footprint has a non-finite vertex");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto e1 = vertices[(i + 1) % n] - vertices[i];
            const auto e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            if (!(cross(e1, e2) > 0.0)) {
                throw InvalidScene("building footprint is not a convex counter-clockwise polygon");
            }
        }
        if (!(signed_area() > 0.0)) {
            throw InvalidScene("building footprint has non-positive area");
        }
    }
};

enum class Environment { suburban, urban };

/// Road network plus buildings. Suburban scenes have no buildings and
/// resolve LOS stochastically; urban scenes resolve it geometrically.
struct Scene {
    Environment environment = Environment::suburban;
    RoadNetwork network;
    std::vector<BuildingFootprint> buildings;
};

struct VehicleNode {
    std::size_t id = 0;
    Point2D position;
    double heading = 0.0; ///< radians
    double speed = 0.0;   ///< m/s
    double antenna_height = 1.5;

    // Placement on the network, needed to move along it.
    std::size_t segment = 0;
    double arc = 0.0;     ///< distance from the segment start along its centerline
    double lateral = 0.0; ///< signed offset along the segment's left normal
    int direction = 1;    ///< +1 travels start->end, -1 end->start
};

struct Snapshot {
    std::vector<VehicleNode> vehicles;
    std::vector<BuildingFootprint> buildings;
    std::uint64_t seed = 0;
};

namespace detail {

inline void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be a positive finite number");
    }
}

inline void finalize(RoadNetwork& net)
{
    net.total_centerline_length = 0.0;
    for (std::size_t i = 0; i < net.segments.size(); ++i) {
        net.segments[i].id = i;
        net.total_centerline_length += net.segments[i].length();
    }
}

inline void add_cross(RoadNetwork& net, double arm_length, double road_width)
{
    net.segments.push_back({0, 0, {-arm_length, 0.0}, {arm_length, 0.0}, road_width});
    net.segments.push_back({0, 1, {0.0, -arm_length}, {0.0, arm_length}, road_width});
}

} // namespace detail

inline constexpr std::size_t kRampChords = 16;

/// Two perpendicular roads of length 2*arm_length crossing at the origin.
inline RoadNetwork build_cross_junction(double arm_length, double road_width)
{
    detail::require_positive(arm_length, "arm_length");
    detail::require_positive(road_width, "road_width");
    RoadNetwork net;
    detail::add_cross(net, arm_length, road_width);
    net.region_side = 2.0 * arm_length;
    detail::finalize(net);
    return net;
}

/// Cross junction plus four 270-degree loop ramps, one per quadrant.
///
/// Each loop is a circle of radius `loop_radius` tangent to both arms, entered
/// from one arm and left onto the adjacent arm after three quarters of a turn.
/// The arc is approximated by kRampChords chords.
inline RoadNetwork build_cloverleaf(double arm_length, double loop_radius, double road_width)
{
    detail::require_positive(arm_length, "arm_length");
    detail::require_positive(loop_radius, "loop_radius");
    detail::require_positive(road_width, "road_width");
    if (!(arm_length > 4.0 * loop_radius)) {
        throw InvalidParameter("arm_length must exceed 4 * loop_radius for the loops to fit");
    }
    RoadNetwork net;
    detail::add_cross(net, arm_length, road_width);

    constexpr double sweep = 1.5 * std::numbers::pi;
    const double quadrant_sign[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    for (std::size_t q = 0; q < 4; ++q) {
        const double sx = quadrant_sign[q][0];
        const double sy = quadrant_sign[q][1];
        const Point2D center{sx * loop_radius, sy * loop_radius};
        // Start where the circle touches the x axis, sweep away from the
        // origin, end where it touches the y axis.
        const double start_angle = std::atan2(-sy, 0.0);
        const double turn = (sx * sy > 0.0) ? 1.0 : -1.0;
        auto point_at = [&](std::size_t k) {
            const double a = start_angle + turn * sweep * static_cast<double>(k) /
                                               static_cast<double>(kRampChords);
            return Point2D{center.x + loop_radius * std::cos(a),
                           center.y + loop_radius * std::sin(a)};
        };
        for (std::size_t k = 0; k < kRampChords; ++k) {
            net.segments.push_back({0, 2 + q, point_at(k), point_at(k + 1), road_width});
        }
    }
    net.region_side = 2.0 * arm_length;
    detail::finalize(net);
    return net;
}

/// Manhattan grid of (blocks_per_side + 1) streets in each direction with one
/// rectangular building per block, inset street_width/2 from every centerline.
inline Scene build_urban_grid(std::size_t blocks_per_side, double block_size, double street_width)
{
    if (blocks_per_side < 1) {
        throw InvalidParameter("blocks_per_side must be >= 1");
    }
    detail::require_positive(block_size, "block_size");
    detail::require_positive(street_width, "street_width");
    if (!(block_size > street_width)) {
        throw InvalidParameter("block_size must exceed street_width");
    }
    Scene scene;
    scene.environment = Environment::urban;
    auto& net = scene.network;
    const double side = static_cast<double>(blocks_per_side) * block_size;
    const double half = 0.5 * side;
    std::size_t road = 0;
    for (std::size_t k = 0; k <= blocks_per_side; ++k) {
        const double c = -half + static_cast<double>(k) * block_size;
        net.segments.push_back({0, road++, {-half, c}, {half, c}, street_width});
    }
    for (std::size_t k = 0; k <= blocks_per_side; ++k) {
        const double c = -half + static_cast<double>(k) * block_size;
        net.segments.push_back({0, road++, {c, -half}, {c, half}, street_width});
    }
    net.region_side = side;
    detail::finalize(net);

    const double inset = 0.5 * street_width;
    for (std::size_t i = 0; i < blocks_per_side; ++i) {
        for (std::size_t j = 0; j < blocks_per_side; ++j) {
            const double x0 = -half + static_cast<double>(i) * block_size + inset;
            const double y0 = -half + static_cast<double>(j) * block_size + inset;
            const double x1 = x0 + block_size - street_width;
            const double y1 = y0 + block_size - street_width;
            scene.buildings.push_back({{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}});
        }
    }
    return scene;
}

/// Scene wrapper for the building-free road layouts.
inline Scene suburban_scene(RoadNetwork network)
{
    return Scene{Environment::suburban, std::move(network), {}};
}

struct VehicleDefaults {
    double speed = 25.0;
    double antenna_height = 1.5;
};

namespace detail {

inline double segment_heading(const RoadSegment& s, int direction)
{
    const auto d = s.direction() * static_cast<double>(direction);
    return std::atan2(d.y, d.x);
}

inline void place_on(VehicleNode& v, const RoadSegment& s)
{
    v.position = s.at(v.arc, v.lateral);
    v.heading = segment_heading(s, v.direction);
}

} // namespace detail

/// Places exactly `count` vehicles uniformly over the centerline length, with
/// uniform lateral offset across the road width and uniform travel direction.
inline std::vector<VehicleNode> place_n_vehicles(const RoadNetwork& network, std::size_t count,
                                                 Stream& rng, VehicleDefaults defaults = {})
{
    std::vector<VehicleNode> out;
    if (count == 0) {
        return out;
    }
    if (network.segments.empty() || !(network.total_centerline_length > 0.0)) {
        throw InvalidParameter("cannot place vehicles on an empty network");
    }
    std::vector<double> cumulative;
    cumulative.reserve(network.segments.size());
    double acc = 0.0;
    for (const auto& s : network.segments) {
        acc += s.length();
        cumulative.push_back(acc);
    }
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            --it;
        }
        const auto seg = static_cast<std::size_t>(it - cumulative.begin());
        const auto& s = network.segments[seg];
        const double seg_begin = seg == 0 ? 0.0 : cumulative[seg - 1];
        VehicleNode v;
        v.id = i;
        v.segment = seg;
        v.arc = std::clamp(u - seg_begin, 0.0, s.length());
        v.lateral = rng.uniform(-0.5 * s.width, 0.5 * s.width);
        v.direction = rng.bernoulli(0.5) ? 1 : -1;
        v.speed = defaults.speed;
        v.antenna_height = defaults.antenna_height;
        detail::place_on(v, s);
        out.push_back(v);
    }
    return out;
}

/// Poisson point process on the roads: N ~ Poisson(density * region area),
/// then place_n_vehicles.
inline std::vector<VehicleNode> place_vehicles(const RoadNetwork& network, double density,
                                               Stream& rng, VehicleDefaults defaults = {})
{
    if (!(density >= 0.0) || !std::isfinite(density)) {
        throw InvalidParameter("density must be >= 0");
    }
    const auto count = rng.poisson(density * network.region_area_km2());
    return place_n_vehicles(network, static_cast<std::size_t>(count), rng, defaults);
}

/// True iff the open segment (p, q) misses the interior of every building.
/// Touching an edge or a vertex without entering the interior is clear.
inline bool los_clear(Point2D p, Point2D q, std::span<const BuildingFootprint> buildings)
{
    if (p == q) {
        throw InvalidParameter("los_clear: endpoints coincide");
    }
    const Point2D d = q - p;
    const double seg_len = norm(d);
    for (const auto& b : buildings) {
        b.validate();
        double min_x = b.vertices[0].x, max_x = min_x;
        double min_y = b.vertices[0].y, max_y = min_y;
        for (const auto& v : b.vertices) {
            min_x = std::min(min_x, v.x);
            max_x = std::max(max_x, v.x);
            min_y = std::min(min_y, v.y);
            max_y = std::max(max_y, v.y);
        }
        if (std::max(p.x, q.x) <= min_x || std::min(p.x, q.x) >= max_x ||
            std::max(p.y, q.y) <= min_y || std::min(p.y, q.y) >= max_y) {
            continue;
        }
        // Parametric clip of p + t*d, t in (0, 1), against the inward half-planes.
        double lo = 0.0;
        double hi = 1.0;
        bool empty = false;
        const auto n = b.vertices.size();
        for (std::size_t k = 0; k < n && !empty; ++k) {
            const auto e = b.vertices[(k + 1) % n] - b.vertices[k];
            const Point2D inward{-e.y, e.x};
            const double scale = norm(inward);
            const double a = dot(inward, p - b.vertices[k]) / scale; // signed distance of p
            const double rate = dot(inward, d) / scale;              // metres per unit t
            if (std::abs(rate) <= 1e-12 * seg_len) {
                if (a <= 1e-9) {
                    empty = true; // parallel to the edge line, on or outside it
                }
            } else if (rate > 0.0) {
                lo = std::max(lo, -a / rate);
            } else {
                hi = std::min(hi, -a / rate);
            }
        }
        if (!empty && (hi - lo) * seg_len > 1e-9) {
            return false;
        }
    }
    return true;
}

/// Moves every vehicle speed*dt along its road. A vehicle running off the end
/// of its road re-enters at the road's start (in its travel direction), so the
/// arc-length coordinate lives on a circle and density stays stationary.
inline std::vector<VehicleNode> advance(std::span<const VehicleNode> vehicles,
                                        const RoadNetwork& network, double dt)
{
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw InvalidParameter("advance: dt must be >= 0");
    }
    std::vector<VehicleNode> out(vehicles.begin(), vehicles.end());
    if (dt == 0.0) {
        return out;
    }
    for (auto& v : out) {
        const auto [first, last] = network.road_range(v.segment);
        double road_len = 0.0;
        double pos = 0.0;
        for (std::size_t s = first; s < last; ++s) {
            if (s == v.segment) {
                pos = road_len + v.arc;
            }
            road_len += network.segments[s].length();
        }
        pos = std::fmod(pos + static_cast<double>(v.direction) * v.speed * dt, road_len);
        if (pos < 0.0) {
            pos += road_len;
        }
        std::size_t seg = first;
        double begin = 0.0;
        while (seg + 1 < last && pos >= begin + network.segments[seg].length()) {
            begin += network.segments[seg].length();
            ++seg;
        }
        v.segment = seg;
        v.arc = std::clamp(pos - begin, 0.0, network.segments[seg].length());
        detail::place_on(v, network.segments[seg]);
    }
    return out;
}

/// Arc-length coordinate of a vehicle along the concatenation of all segments.
inline double network_arc_coordinate(const RoadNetwork& network, const VehicleNode& v)
{
    double offset = 0.0;
    for (std::size_t s = 0; s < v.segment; ++s) {
        offset += network.segments[s].length();
    }
    return offset + v.arc;
}

} // namespace v2x
