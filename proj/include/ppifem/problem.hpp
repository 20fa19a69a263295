#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "ppifem/geometry.hpp"

namespace ppifem {

/// Exact solution branches u_i with gradients, one per subdomain.
struct ExactSolution {
    std::array<std::function<double(Point)>, 3> u;
    std::array<std::function<Point(Point)>, 3> grad;

    double value(int region, Point p) const {
        return u[static_cast<std::size_t>(region - 1)](p);
    }
    Point gradient(int region, Point p) const {
        return grad[static_cast<std::size_t>(region - 1)](p);
    }
};

/// Interface problem data: -div(beta grad u) = f with u = g on the boundary,
/// [u] = 0 and prescribed normal flux jumps b_i across the interfaces.
struct ProblemSpec {
    std::string name;
    Rect domain;
    SubdomainGeometry geom;
    std::array<double, 3> beta{1.0, 1.0, 1.0};
    std::function<double(Point, int)> f;               // source, per subdomain branch
    std::array<std::function<double(Point)>, 3> b;     // flux jump data on interface i
    std::function<double(Point)> g;                    // Dirichlet boundary values
    std::optional<ExactSolution> exact;
};

/// One solution branch with the derivatives needed to manufacture data.
struct BranchFunctions {
    std::function<double(Point)> u;
    std::function<Point(Point)> grad;
    std::function<double(Point)> laplacian;
};

/// Builds a ProblemSpec from exact branches: f = -beta_i lap(u_i), the b_i
/// from the branch gradients with level-set normals oriented from the minus
/// to the plus subdomain of each interface, and g from the exact solution.
ProblemSpec make_manufactured_problem(std::string name, Rect domain, SubdomainGeometry geom,
                                      std::array<double, 3> beta,
                                      std::array<BranchFunctions, 3> branches);

/// Square domain split by three straight lines through one interior point.
ProblemSpec make_example1(std::array<double, 3> beta);

/// Circle-plus-line geometry: subdomain 1 inside the circle, the outside
/// split by the line, junction points where the line meets the circle.
ProblemSpec make_example2(std::array<double, 3> beta);

ProblemSpec make_example(int which, std::array<double, 3> beta);

/// Verifies f, b_i, g against finite differences of the exact solution at
/// random sample points; throws Error on disagreement.
void check_manufactured(const ProblemSpec& spec, int samples = 200, unsigned seed = 12345);

}  // namespace ppifem
