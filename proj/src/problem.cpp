#include "ppifem/problem.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ppifem/errors.hpp"

namespace ppifem {

namespace {

// Unit normal of interface i at p, oriented from minus_region(i) into
// plus_region(i). sigma is the orientation sign of grad(phi_i).
Point oriented_normal(const SubdomainGeometry& geom, int interface, double sigma, Point p) {
    Point g = geom.level_gradient(interface, p);
    const double n = norm(g);
    if (n == 0.0) throw Error("oriented_normal: vanishing level-set gradient");
    return (sigma / n) * g;
}

// Finds one crossing of each interface on a coarse grid and fixes the sign
// sigma_i so that sigma_i * grad(phi_i) points from the minus into the plus
// subdomain. Interfaces that do not appear in the domain keep sigma = 0.
std::array<double, 3> probe_orientations(const SubdomainGeometry& geom, const Rect& domain) {
    std::array<double, 3> sigma{0.0, 0.0, 0.0};
    const int grid = 48;
    int missing = 3;
    for (int pass = 0; pass < 2 && missing > 0; ++pass) {
        const bool horizontal = pass == 0;
        for (int j = 0; j <= grid && missing > 0; ++j) {
            for (int i = 0; i < grid && missing > 0; ++i) {
                const double u0 = static_cast<double>(i) / grid;
                const double u1 = static_cast<double>(i + 1) / grid;
                const double v = static_cast<double>(j) / grid;
                Point a, b;
                if (horizontal) {
                    a = {domain.x0 + u0 * domain.width(), domain.y0 + v * domain.height()};
                    b = {domain.x0 + u1 * domain.width(), domain.y0 + v * domain.height()};
                } else {
                    a = {domain.x0 + v * domain.width(), domain.y0 + u0 * domain.height()};
                    b = {domain.x0 + v * domain.width(), domain.y0 + u1 * domain.height()};
                }
                for (const EdgeCrossing& c : edge_region_crossings(geom, a, b)) {
                    const std::size_t k = static_cast<std::size_t>(c.interface_id - 1);
                    if (sigma[k] != 0.0) continue;
                    const Point g = geom.level_gradient(c.interface_id, c.p);
                    const double along = dot(g, b - a);
                    if (along == 0.0) continue;
                    const bool walk_to_plus =
                        c.region_after == SubdomainGeometry::plus_region(c.interface_id);
                    sigma[k] = (along > 0.0 ? 1.0 : -1.0) * (walk_to_plus ? 1.0 : -1.0);
                    --missing;
                }
            }
        }
    }
    return sigma;
}

}  // namespace

ProblemSpec make_manufactured_problem(std::string name, Rect domain, SubdomainGeometry geom,
                                      std::array<double, 3> beta,
                                      std::array<BranchFunctions, 3> branches) {
    ProblemSpec spec{std::move(name), domain, std::move(geom), beta, nullptr, {}, nullptr,
                     std::nullopt};

    ExactSolution exact;
    for (int r = 0; r < 3; ++r) {
        exact.u[static_cast<std::size_t>(r)] = branches[static_cast<std::size_t>(r)].u;
        exact.grad[static_cast<std::size_t>(r)] = branches[static_cast<std::size_t>(r)].grad;
    }
    spec.exact = exact;

    spec.f = [branches, beta](Point p, int region) {
        const std::size_t r = static_cast<std::size_t>(region - 1);
        return -beta[r] * branches[r].laplacian(p);
    };

    const std::array<double, 3> sigma = probe_orientations(spec.geom, domain);
    for (int i = 1; i <= 3; ++i) {
        const int rm = SubdomainGeometry::minus_region(i);
        const int rp = SubdomainGeometry::plus_region(i);
        const double sg = sigma[static_cast<std::size_t>(i - 1)];
        const double bp = beta[static_cast<std::size_t>(rp - 1)];
        const double bm = beta[static_cast<std::size_t>(rm - 1)];
        auto grad_p = branches[static_cast<std::size_t>(rp - 1)].grad;
        auto grad_m = branches[static_cast<std::size_t>(rm - 1)].grad;
        SubdomainGeometry geom_copy = spec.geom;
        spec.b[static_cast<std::size_t>(i - 1)] = [=](Point p) {
            if (sg == 0.0)
                throw Error("flux jump requested on an interface absent from the domain");
            const Point n = oriented_normal(geom_copy, i, sg, p);
            return dot(bp * grad_p(p) - bm * grad_m(p), n);
        };
    }

    ExactSolution exact_copy = *spec.exact;
    SubdomainGeometry geom_copy = spec.geom;
    spec.g = [exact_copy, geom_copy](Point p) {
        return exact_copy.value(geom_copy.classify_tolerant(p), p);
    };
    return spec;
}

namespace {

BranchFunctions scale_branch(BranchFunctions f, double s) {
    BranchFunctions out;
    out.u = [f, s](Point p) { return s * f.u(p); };
    out.grad = [f, s](Point p) { return s * f.grad(p); };
    out.laplacian = [f, s](Point p) { return s * f.laplacian(p); };
    return out;
}

// u = sin(s * A * B) for affine A = ma x + y - ca, B = mb x + y - cb.
BranchFunctions sin_product_branch(double ma, double ca, double mb, double cb, double s) {
    const Point gA{ma, 1.0};
    const Point gB{mb, 1.0};
    const double gAgB = ma * mb + 1.0;
    auto A = [ma, ca](Point p) { return ma * p.x + p.y - ca; };
    auto B = [mb, cb](Point p) { return mb * p.x + p.y - cb; };
    BranchFunctions f;
    f.u = [=](Point p) { return std::sin(s * A(p) * B(p)); };
    f.grad = [=](Point p) {
        const double w = s * A(p) * B(p);
        const Point gw = s * (B(p) * gA + A(p) * gB);
        return std::cos(w) * gw;
    };
    f.laplacian = [=](Point p) {
        const double w = s * A(p) * B(p);
        const Point gw = s * (B(p) * gA + A(p) * gB);
        return -std::sin(w) * dot(gw, gw) + std::cos(w) * 2.0 * s * gAgB;
    };
    return f;
}

}  // namespace

ProblemSpec make_example1(std::array<double, 3> beta) {
    const double m1 = 38.0 / 7.0, c1 = 9.0 / 28.0;
    const double m2 = 5.25, c2 = 0.3125;
    const double m3 = 1.0 / 19.0, c3 = 1.0 / 19.0;

    std::array<SubdomainGeometry::ScalarField, 3> levels = {
        [=](Point p) { return m1 * p.x + p.y - c1; },
        [=](Point p) { return m2 * p.x + p.y - c2; },
        [=](Point p) { return m3 * p.x + p.y - c3; },
    };
    // Subdomain 2 is the sector right of the flat line and below both steep
    // lines' upper rays; subdomain 3 is the thin wedge between the steep
    // lines above the junction point; subdomain 1 is the rest.
    SubdomainGeometry::SignRule rule = [](const std::array<int, 3>& s) {
        if (s[1] > 0 && s[2] > 0) return s[0] > 0 ? 2 : 3;
        return 1;
    };
    SubdomainGeometry geom(levels, rule);
    geom.set_gradients({
        [=](Point) { return Point{m1, 1.0}; },
        [=](Point) { return Point{m2, 1.0}; },
        [=](Point) { return Point{m3, 1.0}; },
    });

    std::array<BranchFunctions, 3> branches = {
        scale_branch(sin_product_branch(m3, c3, m2, c2, 1.0), 1.0 / beta[0]),
        scale_branch(sin_product_branch(m3, c3, m1, c1, 1.0), 1.0 / beta[1]),
        scale_branch(sin_product_branch(m1, c1, m2, c2, 0.1), 1.0 / beta[2]),
    };
    return make_manufactured_problem("example1", {-1.0, -1.0, 1.0, 1.0}, std::move(geom), beta,
                                     branches);
}

ProblemSpec make_example2(std::array<double, 3> beta) {
    std::array<SubdomainGeometry::ScalarField, 3> levels = {
        [](Point p) { return 3.0 * p.x - 4.0 * p.y; },
        [](Point p) { return p.x * p.x + p.y * p.y - 0.25; },
        [](Point p) { return -(p.x * p.x + p.y * p.y) + 0.25; },
    };
    SubdomainGeometry::SignRule rule = [](const std::array<int, 3>& s) {
        if (s[1] < 0) return 1;
        return s[0] > 0 ? 2 : 3;
    };
    SubdomainGeometry geom(levels, rule);
    geom.set_gradients({
        [](Point) { return Point{3.0, -4.0}; },
        [](Point p) { return Point{2.0 * p.x, 2.0 * p.y}; },
        [](Point p) { return Point{-2.0 * p.x, -2.0 * p.y}; },
    });

    BranchFunctions u1;
    u1.u = [](Point p) {
        const double r2 = p.x * p.x + p.y * p.y;
        return std::pow(r2, 1.5) - 0.125;
    };
    u1.grad = [](Point p) {
        const double r = std::hypot(p.x, p.y);
        return Point{3.0 * r * p.x, 3.0 * r * p.y};
    };
    u1.laplacian = [](Point p) { return 9.0 * std::hypot(p.x, p.y); };

    BranchFunctions u2;
    u2.u = [](Point p) {
        return (p.x * p.x + p.y * p.y - 0.25) * std::sin(3.0 * p.x - 4.0 * p.y);
    };
    u2.grad = [](Point p) {
        const double phi1 = 3.0 * p.x - 4.0 * p.y;
        const double phi2 = p.x * p.x + p.y * p.y - 0.25;
        const double sn = std::sin(phi1), cs = std::cos(phi1);
        return Point{2.0 * p.x * sn + 3.0 * phi2 * cs, 2.0 * p.y * sn - 4.0 * phi2 * cs};
    };
    u2.laplacian = [](Point p) {
        const double phi1 = 3.0 * p.x - 4.0 * p.y;
        const double phi2 = p.x * p.x + p.y * p.y - 0.25;
        return 4.0 * std::sin(phi1) + 2.0 * (6.0 * p.x - 8.0 * p.y) * std::cos(phi1) -
               25.0 * phi2 * std::sin(phi1);
    };

    BranchFunctions u3;
    u3.u = [](Point p) {
        return (3.0 * p.x - 4.0 * p.y) * std::log(p.x * p.x + p.y * p.y + 0.75);
    };
    u3.grad = [](Point p) {
        const double s = p.x * p.x + p.y * p.y + 0.75;
        const double phi1 = 3.0 * p.x - 4.0 * p.y;
        const double L = std::log(s);
        return Point{3.0 * L + phi1 * 2.0 * p.x / s, -4.0 * L + phi1 * 2.0 * p.y / s};
    };
    u3.laplacian = [](Point p) {
        const double s = p.x * p.x + p.y * p.y + 0.75;
        const double phi1 = 3.0 * p.x - 4.0 * p.y;
        return (12.0 * p.x - 16.0 * p.y) / s + 3.0 * phi1 / (s * s);
    };

    std::array<BranchFunctions, 3> branches = {scale_branch(u1, 1.0 / beta[0]),
                                               scale_branch(u2, 1.0 / beta[1]),
                                               scale_branch(u3, 1.0 / beta[2])};
    return make_manufactured_problem("example2", {-1.0, -1.0, 1.0, 1.0}, std::move(geom), beta,
                                     branches);
}

ProblemSpec make_example(int which, std::array<double, 3> beta) {
    if (which == 1) return make_example1(beta);
    if (which == 2) return make_example2(beta);
    throw ConfigError("unknown built-in example (use 1 or 2)");
}

void check_manufactured(const ProblemSpec& spec, int samples, unsigned seed) {
    if (!spec.exact) throw MissingExactSolution("check_manufactured: no exact solution");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(spec.domain.x0, spec.domain.x1);
    std::uniform_real_distribution<double> uy(spec.domain.y0, spec.domain.y1);
    const ExactSolution& ex = *spec.exact;

    // Branch formulas are globally smooth, so finite differences can be taken
    // on each branch directly without dodging the interfaces.
    const double hg = 1e-6;
    const double hl = 2e-3;
    for (int it = 0; it < samples; ++it) {
        const Point p{ux(rng), uy(rng)};
        for (int r = 1; r <= 3; ++r) {
            auto u = [&](Point q) { return ex.value(r, q); };
            const Point g = ex.gradient(r, p);
            const Point g_fd{(u({p.x + hg, p.y}) - u({p.x - hg, p.y})) / (2.0 * hg),
                             (u({p.x, p.y + hg}) - u({p.x, p.y - hg})) / (2.0 * hg)};
            if (norm(g_fd - g) > 1e-8 * (1.0 + norm(g)) + 1e-9)
                throw Error("check_manufactured: exact gradient disagrees with finite differences");

            auto d2 = [&](double cx, double cy) {
                return (-u({p.x + 2 * hl * cx, p.y + 2 * hl * cy}) +
                        16.0 * u({p.x + hl * cx, p.y + hl * cy}) - 30.0 * u(p) +
                        16.0 * u({p.x - hl * cx, p.y - hl * cy}) -
                        u({p.x - 2 * hl * cx, p.y - 2 * hl * cy})) /
                       (12.0 * hl * hl);
            };
            const double lap_fd = d2(1.0, 0.0) + d2(0.0, 1.0);
            const double f_claim = spec.f(p, r);
            const double f_fd = -spec.beta[static_cast<std::size_t>(r - 1)] * lap_fd;
            if (std::abs(f_fd - f_claim) > 1e-6 + 1e-8 * std::abs(f_claim))
                throw Error("check_manufactured: source term disagrees with finite differences");
        }
    }

    // Flux jumps and solution continuity on sampled interface points.
    const int grid = 40;
    std::array<int, 3> found{0, 0, 0};
    for (int j = 1; j < grid; ++j) {
        for (int i = 0; i < grid; ++i) {
            const Point a{spec.domain.x0 + spec.domain.width() * i / grid,
                          spec.domain.y0 + spec.domain.height() * j / grid};
            const Point b{spec.domain.x0 + spec.domain.width() * (i + 1) / grid, a.y};
            for (const EdgeCrossing& c : edge_region_crossings(spec.geom, a, b)) {
                const int k = c.interface_id;
                if (found[static_cast<std::size_t>(k - 1)] >= 8) continue;
                ++found[static_cast<std::size_t>(k - 1)];
                const int rm = SubdomainGeometry::minus_region(k);
                const int rp = SubdomainGeometry::plus_region(k);
                if (std::abs(ex.value(rm, c.p) - ex.value(rp, c.p)) >
                    1e-9 * (1.0 + std::abs(ex.value(rm, c.p))))
                    throw Error("check_manufactured: exact solution jumps across an interface");
                // Recompute the bracket from one-sided finite-difference
                // gradients as an independent path to b_i.
                Point n = spec.geom.level_gradient(k, c.p);
                n = (1.0 / norm(n)) * n;
                auto fd_grad = [&](int r) {
                    auto u = [&](Point q) { return ex.value(r, q); };
                    return Point{(u({c.p.x + hg, c.p.y}) - u({c.p.x - hg, c.p.y})) / (2.0 * hg),
                                 (u({c.p.x, c.p.y + hg}) - u({c.p.x, c.p.y - hg})) / (2.0 * hg)};
                };
                const Point jump = spec.beta[static_cast<std::size_t>(rp - 1)] * fd_grad(rp) -
                                   spec.beta[static_cast<std::size_t>(rm - 1)] * fd_grad(rm);
                const double b_fd = std::abs(dot(jump, n));
                const double b_claim = std::abs(spec.b[static_cast<std::size_t>(k - 1)](c.p));
                if (std::abs(b_fd - b_claim) > 1e-6 + 1e-6 * std::abs(b_claim))
                    throw Error("check_manufactured: flux jump disagrees with finite differences");
            }
        }
    }

    // Boundary data must match the exact solution.
    for (int i = 0; i <= 50; ++i) {
        const double t = static_cast<double>(i) / 50;
        const Point p{spec.domain.x0 + t * spec.domain.width(), spec.domain.y0};
        const int r = spec.geom.classify_tolerant(p);
        if (std::abs(spec.g(p) - ex.value(r, p)) > 1e-12 * (1.0 + std::abs(spec.g(p))))
            throw Error("check_manufactured: boundary data disagrees with the exact solution");
    }
}

}  // namespace ppifem
