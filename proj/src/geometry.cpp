#include "hrc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrc/kernels.hpp"

namespace hrc::geom {

WorldPolygon make_polygon(const std::vector<Vec2>& vertices) {
    WorldPolygon p;
    const size_t n = vertices.size();
    p.xs.reserve(n);
    p.ys.reserve(n);
    p.normals.reserve(n);
    for (const Vec2& v : vertices) {
        p.xs.push_back(v.x);
        p.ys.push_back(v.y);
    }
    for (size_t k = 0; k < n; ++k) {
        const Vec2 a = vertices[k];
        const Vec2 b = vertices[(k + 1) % n];
        const Vec2 e = b - a;
        Vec2 normal{-e.y, e.x};
        const double len = normal.norm();
        if (len > 0.0) normal = normal * (1.0 / len);
        p.normals.push_back(normal);
    }
    return p;
}

WorldPolygon translate(const WorldPolygon& p, const Vec2& offset) {
    WorldPolygon out = p;
    for (double& x : out.xs) x += offset.x;
    for (double& y : out.ys) y += offset.y;
    return out;
}

namespace {

bool axis_separates(const WorldPolygon& a, const WorldPolygon& b, const Vec2& axis) {
    const auto& k = kernels::ops();
    double lo_a, hi_a, lo_b, hi_b;
    k.project_minmax(a.xs.data(), a.ys.data(), a.size(), axis.x, axis.y, &lo_a, &hi_a);
    k.project_minmax(b.xs.data(), b.ys.data(), b.size(), axis.x, axis.y, &lo_b, &hi_b);
    return hi_a < lo_b || hi_b < lo_a;
}

}  // namespace

SeparationResult separated(const WorldPolygon& a, const WorldPolygon& b) {
    for (const Vec2& axis : a.normals)
        if (axis_separates(a, b, axis)) return {true, axis};
    for (const Vec2& axis : b.normals)
        if (axis_separates(a, b, axis)) return {true, axis};
    return {false, std::nullopt};
}

bool in_annulus(const Vec2& point, const Vec2& center, double d_min, double d_max) {
    const double d_sq = (point - center).norm_sq();
    return d_min * d_min <= d_sq && d_sq <= d_max * d_max;
}

bool in_bounds(const std::vector<double>& coords, const std::vector<Interval>& bounds) {
    if (coords.size() != bounds.size())
        throw Error(ErrorCode::DimensionMismatch, "in_bounds: coords/bounds size mismatch");
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] < bounds[i].lo || coords[i] > bounds[i].hi) return false;
    return true;
}

std::optional<BoundingBox> bounding_box(const std::vector<const WorldPolygon*>& polys) {
    BoundingBox box;
    bool any = false;
    for (const WorldPolygon* p : polys) {
        if (p == nullptr || p->size() == 0) continue;
        const auto [mnx, mxx] = std::minmax_element(p->xs.begin(), p->xs.end());
        const auto [mny, mxy] = std::minmax_element(p->ys.begin(), p->ys.end());
        if (!any) {
            box = {*mnx, *mny, *mxx, *mxy};
            any = true;
        } else {
            box.min_x = std::min(box.min_x, *mnx);
            box.min_y = std::min(box.min_y, *mny);
            box.max_x = std::max(box.max_x, *mxx);
            box.max_y = std::max(box.max_y, *mxy);
        }
    }
    if (!any) return std::nullopt;
    return box;
}

bool is_convex_ccw(const std::vector<Vec2>& vertices) {
    const size_t n = vertices.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i];
        const Vec2 b = vertices[(i + 1) % n];
        const Vec2 c = vertices[(i + 2) % n];
        const Vec2 e1 = b - a;
        const Vec2 e2 = c - b;
        if (e1.x * e2.y - e1.y * e2.x <= 0.0) return false;
    }
    return true;
}

}  // namespace hrc::geom
