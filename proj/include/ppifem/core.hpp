#pragma once

#include <cmath>
#include <vector>

namespace ppifem {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diameter() const { return std::hypot(width(), height()); }
    Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }

    /// Corner i = 0..3, counter-clockwise from lower-left.
    Point corner(int i) const;

    bool contains(Point p, double tol = 0.0) const {
        return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
    }

    /// Distance from p to the boundary of the rectangle (0 if on it).
    double boundary_distance(Point p) const;
};

using Polygon = std::vector<Point>;

/// Signed area (positive for counter-clockwise orientation).
double polygon_area(const Polygon& poly);

Point polygon_centroid(const Polygon& poly);

enum class PointLocation { Outside, Inside, Boundary };

PointLocation locate_in_polygon(const Polygon& poly, Point p, double tol);

}  // namespace ppifem
