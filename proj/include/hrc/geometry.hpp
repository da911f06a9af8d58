#pragma once

#include <optional>
#include <vector>

#include "hrc/types.hpp"

namespace hrc::geom {

// Convex polygon in the world frame, vertices counter-clockwise. Vertices are
// stored as parallel arrays so the projection kernel can stream them; edge
// normals (-dy, dx) are precomputed and normalized.
struct WorldPolygon {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<Vec2> normals;

    size_t size() const { return xs.size(); }
    Vec2 vertex(size_t i) const { return {xs[i], ys[i]}; }
};

WorldPolygon make_polygon(const std::vector<Vec2>& vertices);

// Translated copy (local footprint placed at a centroid).
WorldPolygon translate(const WorldPolygon& p, const Vec2& offset);

struct SeparationResult {
    bool separated = false;
    std::optional<Vec2> axis;  // witness normal when separated
};

// Separating-axis test over the union of both polygons' edge normals.
// Inequalities are strict: exact edge touching counts as overlap.
SeparationResult separated(const WorldPolygon& a, const WorldPolygon& b);

// d_min <= |point - center| <= d_max, both ends inclusive.
bool in_annulus(const Vec2& point, const Vec2& center, double d_min, double d_max);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Component-wise lo <= x <= hi, inclusive. Sizes must match.
bool in_bounds(const std::vector<double>& coords, const std::vector<Interval>& bounds);

// Area and extent of the axis-aligned box enclosing all given polygons.
struct BoundingBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    double area() const { return (max_x - min_x) * (max_y - min_y); }
};
std::optional<BoundingBox> bounding_box(const std::vector<const WorldPolygon*>& polys);

// True when vertices form a strictly convex counter-clockwise polygon.
bool is_convex_ccw(const std::vector<Vec2>& vertices);

}  // namespace hrc::geom
