#include "ppifem/core.hpp"

#include <algorithm>

namespace ppifem {

Point Rect::corner(int i) const {
    switch (i & 3) {
        case 0: return {x0, y0};
        case 1: return {x1, y0};
        case 2: return {x1, y1};
        default: return {x0, y1};
    }
}

double Rect::boundary_distance(Point p) const {
    const double dx = std::min(std::abs(p.x - x0), std::abs(p.x - x1));
    const double dy = std::min(std::abs(p.y - y0), std::abs(p.y - y1));
    if (contains(p)) return std::min(dx, dy);
    double ox = std::max({x0 - p.x, 0.0, p.x - x1});
    double oy = std::max({y0 - p.y, 0.0, p.y - y1});
    return std::hypot(ox, oy);
}

double polygon_area(const Polygon& poly) {
    double twice = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

Point polygon_centroid(const Polygon& poly) {
    const std::size_t n = poly.size();
    double a6 = 0.0;
    Point c{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        const double w = cross(p, q);
        a6 += w;
        c.x += w * (p.x + q.x);
        c.y += w * (p.y + q.y);
    }
    if (a6 == 0.0) {  // degenerate; fall back to the vertex mean
        Point m{0.0, 0.0};
        for (const Point& p : poly) m = m + p;
        return (1.0 / static_cast<double>(n)) * m;
    }
    return (1.0 / (3.0 * a6)) * c;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * ab);
}

}  // namespace

PointLocation locate_in_polygon(const Polygon& poly, Point p, double tol) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= tol)
            return PointLocation::Boundary;
    }
    // Ray casting; boundary grazing is already handled above.
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside ? PointLocation::Inside : PointLocation::Outside;
}

}  // namespace ppifem
