#pragma once

#include <array>
#include <vector>

#include "ppifem/core.hpp"

namespace ppifem {

/// Points and positive weights; weights sum to the measure of the region.
struct QuadRule {
    std::vector<Point> points;
    std::vector<double> weights;

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
        return s;
    }
};

/// 1D Gauss-Legendre nodes/weights on [-1,1], computed once per order and cached.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

/// Gauss-Legendre rule mapped onto the segment [a,b]; exact for polynomials
/// of degree <= 2*order-1 along the segment. order in [1,10].
QuadRule segment_rule(Point a, Point b, int order);

/// Rule on a triangle exact for total degree >= order (symmetric rules up to
/// degree 5, collapsed tensor rules beyond). order in [1,10].
QuadRule triangle_rule(Point a, Point b, Point c, int order);

/// Fan triangulation from the centroid with an ear-clipping fallback when the
/// polygon is not star-shaped from its centroid. Counter-clockwise input.
QuadRule polygon_rule(const Polygon& poly, int order);

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
std::vector<std::array<Point, 3>> triangulate(const Polygon& poly);

}  // namespace ppifem
