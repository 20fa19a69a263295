#include "ppifem/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include "ppifem/errors.hpp"

namespace ppifem {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    // Newton iteration on P_n with the three-term recurrence.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        gl.nodes[n - 1 - i] = x;
        gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

// Dunavant-style symmetric triangle rules in barycentric coordinates.
struct TriOrbit {
    double l1, l2, l3, w;  // w relative to triangle area
};

std::vector<TriOrbit> triangle_orbits(int degree) {
    std::vector<TriOrbit> o;
    auto perm3 = [&](double a, double b, double w) {
        o.push_back({a, b, b, w});
        o.push_back({b, a, b, w});
        o.push_back({b, b, a, w});
    };
    switch (degree) {
        case 1:
            o.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0});
            break;
        case 2:
            perm3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 4:
            perm3(0.108103018168070, 0.445948490915965, 0.223381589678011);
            perm3(0.816847572980459, 0.091576213509771, 0.109951743655322);
            break;
        default:  // degree 5
            o.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225});
            perm3(0.059715871789770, 0.470142064105115, 0.132394152788506);
            perm3(0.797426985353087, 0.101286507323456, 0.125939180544827);
            break;
    }
    return o;
}

// Collapsed tensor (Duffy) rule: exact for total degree d with positive
// weights at any order, used where no symmetric table is wired in.
// area2 is twice the signed triangle area (the constant Jacobian).
void duffy_triangle(QuadRule& rule, Point a, Point b, Point c, int degree, double area2) {
    const int ku = (degree + 3) / 2;  // integrand picks up one extra power of u
    const int kv = (degree + 2) / 2;
    const GaussLegendre& gu = gauss_legendre(ku);
    const GaussLegendre& gv = gauss_legendre(kv);
    for (int i = 0; i < ku; ++i) {
        const double u = 0.5 * (gu.nodes[i] + 1.0);
        const double wu = 0.5 * gu.weights[i];
        for (int j = 0; j < kv; ++j) {
            const double v = 0.5 * (gv.nodes[j] + 1.0);
            const double wv = 0.5 * gv.weights[j];
            const double l2 = u;
            const double l3 = v * (1.0 - u);
            const double l1 = 1.0 - l2 - l3;
            rule.points.push_back(l1 * a + l2 * b + l3 * c);
            rule.weights.push_back(wu * wv * (1.0 - u) * area2);
        }
    }
}

bool fan_is_valid(const Polygon& poly, Point c) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        if (cross(p - c, q - c) <= 0.0) return false;
    }
    return true;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
    static std::array<GaussLegendre, 33> cache;
    static std::array<std::once_flag, 33> once;
    if (order < 1 || order > 32) throw Error("gauss_legendre: order out of range");
    std::call_once(once[order], [order] { cache[order] = compute_gauss_legendre(order); });
    return cache[order];
}

QuadRule segment_rule(Point a, Point b, int order) {
    if (order < 1 || order > 10) throw Error("segment_rule: order must be in [1,10]");
    const GaussLegendre& gl = gauss_legendre(order);
    const double half_len = 0.5 * dist(a, b);
    const Point mid = 0.5 * (a + b);
    const Point half = 0.5 * (b - a);
    QuadRule rule;
    rule.points.reserve(gl.nodes.size());
    rule.weights.reserve(gl.nodes.size());
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        rule.points.push_back(mid + gl.nodes[i] * half);
        rule.weights.push_back(gl.weights[i] * half_len);
    }
    return rule;
}

QuadRule triangle_rule(Point a, Point b, Point c, int order) {
    if (order < 1 || order > 10) throw Error("triangle_rule: order must be in [1,10]");
    const double area2 = cross(b - a, c - a);  // 2 * signed area
    QuadRule rule;
    if (order > 5) {
        duffy_triangle(rule, a, b, c, order, area2);
        return rule;
    }
    const int degree = (order <= 2) ? order : (order <= 4 ? 4 : 5);
    for (const TriOrbit& t : triangle_orbits(degree)) {
        rule.points.push_back(t.l1 * a + t.l2 * b + t.l3 * c);
        rule.weights.push_back(t.w * 0.5 * area2);
    }
    return rule;
}

std::vector<std::array<Point, 3>> triangulate(const Polygon& poly) {
    std::vector<std::array<Point, 3>> tris;
    std::vector<Point> v = poly;
    const double scale = std::abs(polygon_area(poly));
    // Ear clipping; O(n^2) on the tiny polygons that occur here.
    while (v.size() > 3) {
        const std::size_t n = v.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& prev = v[(i + n - 1) % n];
            const Point& cur = v[i];
            const Point& next = v[(i + 1) % n];
            const double a2 = cross(cur - prev, next - prev);
            if (a2 <= 1e-14 * scale) continue;  // reflex or collinear
            bool ear = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                if (locate_in_polygon({prev, cur, next}, v[j], 0.0) == PointLocation::Inside) {
                    ear = false;
                    break;
                }
            }
            if (!ear) continue;
            tris.push_back({prev, cur, next});
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
            break;
        }
        if (!clipped) throw DegeneratePolygon("triangulate: no ear found (non-simple polygon?)");
    }
    if (v.size() == 3) tris.push_back({v[0], v[1], v[2]});
    return tris;
}

QuadRule polygon_rule(const Polygon& poly, int order) {
    if (poly.size() < 3) throw DegeneratePolygon("polygon_rule: fewer than 3 vertices");
    const double area = polygon_area(poly);
    if (area < 1e-14) throw DegeneratePolygon("polygon_rule: area below 1e-14");

    QuadRule rule;
    const Point c = polygon_centroid(poly);
    if (fan_is_valid(poly, c)) {
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            QuadRule tri = triangle_rule(c, poly[i], poly[(i + 1) % n], order);
            rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
            rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
        }
        return rule;
    }
    for (const auto& t : triangulate(poly)) {
        QuadRule tri = triangle_rule(t[0], t[1], t[2], order);
        rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
        rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
    }
    return rule;
}

}  // namespace ppifem
