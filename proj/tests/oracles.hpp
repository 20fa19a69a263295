#pragma once

// Test-only oracles and synthetic-geometry builders. Everything here is kept
// independent of the implementation paths it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "ppifem/geometry.hpp"

namespace ppifem::testing {

// Exact integral of x^p y^q over a simple polygon via Green's theorem; the
// edge integrals use a hard-coded 5-point Gauss rule (exact to degree 9).
inline double polygon_monomial_integral(const Polygon& poly, int p, int q) {
    static const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
    static const double weights[5] = {0.23692688505618908, 0.47862867049936647,
                                      0.5688888888888889, 0.47862867049936647,
                                      0.23692688505618908};
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        const double dy = b.y - a.y;
        if (dy == 0.0) continue;
        for (int g = 0; g < 5; ++g) {
            const double t = 0.5 * (nodes[g] + 1.0);
            const double x = a.x + t * (b.x - a.x);
            const double y = a.y + t * (b.y - a.y);
            total += 0.5 * weights[g] * std::pow(x, p + 1) / (p + 1) * std::pow(y, q) * dy;
        }
    }
    return total;
}

// Three vertical strips: region 1 for x < xa, region 2 between, region 3 for
// x > xb. Interface 3 sits at xa (separating 1|2), interface 1 at xb (2|3);
// interface 2 is present but inactive inside the domain.
inline SubdomainGeometry make_strip_geometry(double xa, double xb) {
    std::array<SubdomainGeometry::ScalarField, 3> levels = {
        [xb](Point p) { return p.x - xb; },
        [](Point p) { return p.x - 50.0; },
        [xa](Point p) { return p.x - xa; },
    };
    SubdomainGeometry::SignRule rule = [](const std::array<int, 3>& s) {
        if (s[2] < 0) return 1;
        return s[0] < 0 ? 2 : 3;
    };
    SubdomainGeometry geom(levels, rule);
    geom.set_gradients({[](Point) { return Point{1.0, 0.0}; },
                        [](Point) { return Point{1.0, 0.0}; },
                        [](Point) { return Point{1.0, 0.0}; }});
    return geom;
}

// Single straight interface `iface`: phi_iface = nx x + ny y - c, other level
// sets inactive. The negative side carries minus_region(iface), so the full
// zero line is active.
inline SubdomainGeometry make_chord_geometry(int iface, double nx, double ny, double c) {
    std::array<SubdomainGeometry::ScalarField, 3> levels;
    for (int i = 1; i <= 3; ++i) {
        if (i == iface)
            levels[static_cast<std::size_t>(i - 1)] = [=](Point p) {
                return nx * p.x + ny * p.y - c;
            };
        else
            levels[static_cast<std::size_t>(i - 1)] = [](Point) { return 1.0; };
    }
    SubdomainGeometry::SignRule rule = [iface](const std::array<int, 3>& s) {
        return s[static_cast<std::size_t>(iface - 1)] < 0
                   ? SubdomainGeometry::minus_region(iface)
                   : SubdomainGeometry::plus_region(iface);
    };
    SubdomainGeometry geom(levels, rule);
    geom.set_gradients({[=](Point) { return Point{nx, ny}; },
                        [=](Point) { return Point{nx, ny}; },
                        [=](Point) { return Point{nx, ny}; }});
    return geom;
}

// Three rays from junction point P at the given angles carry interfaces
// 1..3; the sign-pattern table is derived by sampling each sector.
inline SubdomainGeometry make_junction_geometry(Point P, std::array<double, 3> ray_angle) {
    std::array<Point, 3> dir;
    for (int i = 0; i < 3; ++i)
        dir[static_cast<std::size_t>(i)] = {std::cos(ray_angle[static_cast<std::size_t>(i)]),
                                            std::sin(ray_angle[static_cast<std::size_t>(i)])};
    std::array<SubdomainGeometry::ScalarField, 3> levels;
    std::array<SubdomainGeometry::VectorField, 3> grads;
    for (int i = 0; i < 3; ++i) {
        const Point d = dir[static_cast<std::size_t>(i)];
        levels[static_cast<std::size_t>(i)] = [=](Point p) { return cross(d, p - P); };
        grads[static_cast<std::size_t>(i)] = [=](Point) { return Point{-d.y, d.x}; };
    }

    // Sector between consecutive rays i and j belongs to the subdomain
    // adjacent to both interfaces: the index different from i and j.
    std::array<int, 8> table{};
    std::array<int, 3> order{0, 1, 2};
    auto angle_of = [&](int i) {
        return std::atan2(dir[static_cast<std::size_t>(i)].y, dir[static_cast<std::size_t>(i)].x);
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return angle_of(a) < angle_of(b); });
    for (int s = 0; s < 3; ++s) {
        const int ia = order[static_cast<std::size_t>(s)];
        const int ib = order[static_cast<std::size_t>((s + 1) % 3)];
        double a0 = angle_of(ia);
        double a1 = angle_of(ib);
        if (a1 <= a0) a1 += 2.0 * M_PI;
        const int region = 6 - (ia + 1) - (ib + 1);
        // Dense sweep: a sector may span several sign cells (the inactive
        // ray parts fall inside it), and each cell needs a table entry.
        for (int k = 1; k < 64; ++k) {
            const double frac = static_cast<double>(k) / 64;
            const double ang = a0 + frac * (a1 - a0);
            const Point probe = P + Point{std::cos(ang), std::sin(ang)};
            int pattern = 0;
            for (int i = 0; i < 3; ++i) {
                const Point d = dir[static_cast<std::size_t>(i)];
                if (cross(d, probe - P) > 0.0) pattern |= 1 << i;
            }
            table[static_cast<std::size_t>(pattern)] = region;
        }
    }
    SubdomainGeometry::SignRule rule = [table](const std::array<int, 3>& s) {
        int pattern = 0;
        for (int i = 0; i < 3; ++i)
            if (s[static_cast<std::size_t>(i)] > 0) pattern |= 1 << i;
        const int r = table[static_cast<std::size_t>(pattern)];
        return r == 0 ? 1 : r;
    };
    SubdomainGeometry geom(levels, rule);
    geom.set_gradients(grads);
    return geom;
}

}  // namespace ppifem::testing
