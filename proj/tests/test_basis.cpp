#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ppifem/basis.hpp"
#include "ppifem/errors.hpp"
#include "ppifem/mesh.hpp"
#include "ppifem/problem.hpp"
#include "ppifem/quadrature.hpp"
#include "ppifem/space.hpp"

using namespace ppifem;

namespace {

// Q1 nodal coefficients on a rectangle, expanded in 1, x, y, xy.
PieceCoeffs q1_coeffs(const Rect& r, int node) {
    const double ax = r.width() * r.height();
    auto tensor = [&](double xs, double x_opp, double ys, double y_opp) {
        // (x_opp - x)*(y_opp - y) sign-adjusted so the value is 1 at (xs, ys)
        const double s = 1.0 / ((x_opp - xs) * (y_opp - ys));
        PieceCoeffs c;
        c.a = s * x_opp * y_opp;
        c.b = -s * y_opp;
        c.c = -s * x_opp;
        c.d = s;
        return c;
    };
    (void)ax;
    switch (node) {
        case 0: return tensor(r.x0, r.x1, r.y0, r.y1);
        case 1: return tensor(r.x1, r.x0, r.y0, r.y1);
        case 2: return tensor(r.x1, r.x0, r.y1, r.y0);
        default: return tensor(r.x0, r.x1, r.y1, r.y0);
    }
}

// Integral flux jump of one basis function across a segment, by quadrature
// (independent of the analytic rows used in the construction).
double flux_jump_integral(const LocalBasis& basis, const CutSegment& seg, BasisSelector sel) {
    const double bp = basis.beta[static_cast<std::size_t>(
        basis.cut->pieces[static_cast<std::size_t>(seg.piece_plus)].region - 1)];
    const double bm = basis.beta[static_cast<std::size_t>(
        basis.cut->pieces[static_cast<std::size_t>(seg.piece_minus)].region - 1)];
    return segment_rule(seg.a, seg.b, 6).integrate([&](Point p) {
        const Point gp = evaluate_on_piece(basis, sel, seg.piece_plus, p).grad;
        const Point gm = evaluate_on_piece(basis, sel, seg.piece_minus, p).grad;
        return bp * dot(gp, seg.normal) - bm * dot(gm, seg.normal);
    });
}

void check_all_conditions(const ElementCut& cut, const LocalBasis& basis, double tol) {
    // Kronecker nodal values
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double v = evaluate(basis, {BasisSelector::Nodal, i}, cut.rect.corner(j)).value;
            CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(0.0).scale(1.0).epsilon(tol));
        }
        for (int k = 0; k < basis.flux_count(); ++k) {
            const double v = evaluate(basis, {BasisSelector::Flux, k}, cut.rect.corner(i)).value;
            CHECK(std::abs(v) < tol);
        }
    }
    // value continuity at every segment endpoint, across its piece pair
    auto check_continuity_at = [&](const CutSegment& seg, Point p, BasisSelector sel) {
        const double vm = evaluate_on_piece(basis, sel, seg.piece_minus, p).value;
        const double vp = evaluate_on_piece(basis, sel, seg.piece_plus, p).value;
        CHECK(std::abs(vm - vp) < tol);
    };
    for (const CutSegment& seg : cut.segments) {
        for (int i = 0; i < 4; ++i) {
            check_continuity_at(seg, seg.a, {BasisSelector::Nodal, i});
            check_continuity_at(seg, seg.b, {BasisSelector::Nodal, i});
        }
        for (int k = 0; k < basis.flux_count(); ++k) {
            check_continuity_at(seg, seg.a, {BasisSelector::Flux, k});
            check_continuity_at(seg, seg.b, {BasisSelector::Flux, k});
        }
    }
    // flux-jump integrals: zero for nodal functions, Kronecker for flux ones
    for (std::size_t s = 0; s < cut.segments.size(); ++s) {
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(flux_jump_integral(basis, cut.segments[s], {BasisSelector::Nodal, i})) <
                  tol);
        for (int k = 0; k < basis.flux_count(); ++k) {
            const double want = (static_cast<int>(s) == k) ? 1.0 : 0.0;
            CHECK(flux_jump_integral(basis, cut.segments[s], {BasisSelector::Flux, k}) ==
                  doctest::Approx(want).epsilon(0.0).scale(1.0).epsilon(tol));
        }
    }
}

void check_partition_of_unity(const ElementCut& cut, const LocalBasis& basis) {
    // coefficient level: the four nodal functions sum to the constant 1
    for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
        double sa = 0.0, sb = 0.0, sc = 0.0, sd = 0.0, scale = 1.0;
        for (int i = 0; i < 4; ++i) {
            const PieceCoeffs& c = basis.nodal[static_cast<std::size_t>(i)][pi];
            sa += c.a;
            sb += c.b;
            sc += c.c;
            sd += c.d;
            scale = std::max({scale, std::abs(c.a), std::abs(c.b), std::abs(c.c), std::abs(c.d)});
        }
        CHECK(std::abs(sa - 1.0) < 1e-11 * scale);
        CHECK(std::abs(sb) < 1e-11 * scale);
        CHECK(std::abs(sc) < 1e-11 * scale);
        CHECK(std::abs(sd) < 1e-11 * scale);
    }
}

std::mt19937 rng(20240913);

SubdomainGeometry random_cut_geometry(int kind) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (kind == 0) {  // random single chord
        const int iface = 1 + static_cast<int>(rng() % 3);
        const double ang = 2.0 * M_PI * u(rng);
        const double nx = std::cos(ang), ny = std::sin(ang);
        // offset so the line passes near the element interior
        const double c = nx * (0.3 + 0.4 * u(rng)) + ny * (0.3 + 0.4 * u(rng));
        return testing::make_chord_geometry(iface, nx, ny, c);
    }
    if (kind == 1) {  // two parallel chords
        const double xa = 0.15 + 0.3 * u(rng);
        const double xb = xa + 0.15 + 0.3 * u(rng);
        return testing::make_strip_geometry(xa, std::min(xb, 0.9));
    }
    // junction strictly inside the unit square
    const Point P{0.3 + 0.4 * u(rng), 0.3 + 0.4 * u(rng)};
    const double a0 = 2.0 * M_PI * u(rng);
    const double a1 = a0 + 0.6 + 1.5 * u(rng);
    const double a2 = a1 + 0.6 + 1.5 * u(rng);
    return testing::make_junction_geometry(P, {a0, a1, a2});
}

std::array<double, 3> random_beta() {
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    return {std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), std::pow(10.0, u(rng))};
}

}  // namespace

TEST_CASE("equal coefficients reproduce the standard bilinear basis") {
    const Rect rect{0.0, 0.0, 1.0, 1.0};
    for (int kind : {0, 1, 2}) {
        for (double c : {1.0, 7.5}) {
            const SubdomainGeometry geom = random_cut_geometry(kind);
            ElementCut cut;
            try {
                cut = cut_element(geom, rect);
            } catch (const Error&) {
                continue;  // a random chord may miss the element
            }
            if (cut.cls == CutClass::Regular) continue;
            const LocalBasis basis = build_local_basis(cut, {c, c, c});
            for (int i = 0; i < 4; ++i) {
                const PieceCoeffs q1 = q1_coeffs(rect, i);
                for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
                    const PieceCoeffs& got = basis.nodal[static_cast<std::size_t>(i)][pi];
                    CHECK(std::abs(got.a - q1.a) < 1e-10);
                    CHECK(std::abs(got.b - q1.b) < 1e-10);
                    CHECK(std::abs(got.c - q1.c) < 1e-10);
                    CHECK(std::abs(got.d - q1.d) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("triple-junction system verified against an independent least-squares solve") {
    SubdomainGeometry geom = testing::make_junction_geometry(
        {0.0, 0.0}, {0.1, 2.0 * M_PI / 3.0 + 0.2, -2.0 * M_PI / 3.0 - 0.1});
    const Rect rect{-0.5, -0.5, 0.5, 0.5};
    const ElementCut cut = cut_element(geom, rect);
    REQUIRE(cut.cls == CutClass::TripleJunction);
    const std::array<double, 3> beta{1.0, 10.0, 100.0};
    const LocalBasis basis = build_local_basis(cut, beta);
    CHECK(basis.condition_residual < 1e-10);
    check_all_conditions(cut, basis, 1e-10);
    check_partition_of_unity(cut, basis);

    // Independent path: assemble the same conditions numerically on the
    // twelve piecewise monomials and least-squares solve them.
    const int m = static_cast<int>(cut.pieces.size());
    auto monomial = [](int idx, Point p) {
        switch (idx & 3) {
            case 0: return 1.0;
            case 1: return p.x;
            case 2: return p.y;
            default: return p.x * p.y;
        }
    };
    auto monomial_grad = [](int idx, Point p) {
        switch (idx & 3) {
            case 0: return Point{0.0, 0.0};
            case 1: return Point{1.0, 0.0};
            case 2: return Point{0.0, 1.0};
            default: return Point{p.y, p.x};
        }
    };
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs_nodal[4];
    // nodal rows
    for (int j = 0; j < 4; ++j) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(4 * m);
        const Point corner = rect.corner(j);
        const int piece = cut.find_piece(corner);
        for (int t = 0; t < 4; ++t) row(4 * piece + t) = monomial(t, corner);
        rows.push_back(row);
    }
    // continuity rows at all segment endpoints (the dependent condition at P
    // is harmless for least squares)
    for (const CutSegment& seg : cut.segments) {
        for (Point p : {seg.a, seg.b}) {
            Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(4 * m);
            for (int t = 0; t < 4; ++t) {
                row(4 * seg.piece_minus + t) += monomial(t, p);
                row(4 * seg.piece_plus + t) -= monomial(t, p);
            }
            rows.push_back(row);
        }
    }
    // flux rows by quadrature
    std::vector<int> flux_row_index;
    for (const CutSegment& seg : cut.segments) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(4 * m);
        const double bp = beta[static_cast<std::size_t>(
            cut.pieces[static_cast<std::size_t>(seg.piece_plus)].region - 1)];
        const double bm = beta[static_cast<std::size_t>(
            cut.pieces[static_cast<std::size_t>(seg.piece_minus)].region - 1)];
        const QuadRule rule = segment_rule(seg.a, seg.b, 5);
        for (std::size_t qp = 0; qp < rule.points.size(); ++qp) {
            for (int t = 0; t < 4; ++t) {
                const Point g = monomial_grad(t, rule.points[qp]);
                row(4 * seg.piece_plus + t) += rule.weights[qp] * bp * dot(g, seg.normal);
                row(4 * seg.piece_minus + t) -= rule.weights[qp] * bm * dot(g, seg.normal);
            }
        }
        flux_row_index.push_back(static_cast<int>(rows.size()));
        rows.push_back(row);
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), 4 * m);
    for (std::size_t r = 0; r < rows.size(); ++r) M.row(static_cast<Eigen::Index>(r)) = rows[r];

    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
        rhs(i) = 1.0;
        const Eigen::VectorXd x = M.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
        CHECK((M * x - rhs).cwiseAbs().maxCoeff() < 1e-10);  // residual 0: consistent system
        for (int pi = 0; pi < m; ++pi) {
            const PieceCoeffs& got = basis.nodal[static_cast<std::size_t>(i)][static_cast<std::size_t>(pi)];
            CHECK(std::abs(x(4 * pi + 0) - got.a) < 1e-9);
            CHECK(std::abs(x(4 * pi + 1) - got.b) < 1e-9);
            CHECK(std::abs(x(4 * pi + 2) - got.c) < 1e-9);
            CHECK(std::abs(x(4 * pi + 3) - got.d) < 1e-9);
        }
    }
}

TEST_CASE("flux bases satisfy the unit-jump matrix on assorted cuts") {
    for (int kind : {0, 1, 2}) {
        for (int rep = 0; rep < 4; ++rep) {
            const SubdomainGeometry geom = random_cut_geometry(kind);
            ElementCut cut;
            try {
                cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
            } catch (const Error&) {
                continue;
            }
            if (cut.cls == CutClass::Regular) continue;
            const std::array<double, 3> beta =
                (rep == 0) ? std::array<double, 3>{1.0, 1.0, 1.0} : random_beta();
            const LocalBasis basis = build_local_basis(cut, beta);
            CHECK(basis.condition_residual < 1e-10);
            check_all_conditions(cut, basis, 1e-9);
            check_partition_of_unity(cut, basis);
        }
    }
}

TEST_CASE("flux basis scales inversely with the coefficients") {
    const SubdomainGeometry geom = testing::make_strip_geometry(0.35, 0.7);
    const ElementCut cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
    const std::array<double, 3> beta{2.0, 3.0, 9.0};
    const double lambda = 17.0;
    const LocalBasis base = build_local_basis(cut, beta);
    const LocalBasis scaled =
        build_local_basis(cut, {lambda * beta[0], lambda * beta[1], lambda * beta[2]});
    for (std::size_t k = 0; k < base.flux.size(); ++k) {
        for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
            CHECK(scaled.flux[k][pi].a == doctest::Approx(base.flux[k][pi].a / lambda).epsilon(1e-11));
            CHECK(scaled.flux[k][pi].b == doctest::Approx(base.flux[k][pi].b / lambda).epsilon(1e-11));
            CHECK(scaled.flux[k][pi].c == doctest::Approx(base.flux[k][pi].c / lambda).epsilon(1e-11));
            CHECK(scaled.flux[k][pi].d == doctest::Approx(base.flux[k][pi].d / lambda).epsilon(1e-11));
        }
    }
    // nodal part is invariant
    for (int i = 0; i < 4; ++i)
        for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi)
            CHECK(std::abs(scaled.nodal[static_cast<std::size_t>(i)][pi].a -
                           base.nodal[static_cast<std::size_t>(i)][pi].a) < 1e-11);
}

TEST_CASE("two-interface basis degenerates as the second cut leaves") {
    // second interface slides toward the right edge; the basis approaches
    // the single-interface basis of the remaining cut
    const SubdomainGeometry limit_geom = testing::make_chord_geometry(3, 1.0, 0.0, 0.4);
    const ElementCut limit_cut = cut_element(limit_geom, {0.0, 0.0, 1.0, 1.0});
    const std::array<double, 3> beta{2.0, 5.0, 11.0};
    const LocalBasis limit_basis = build_nodal_basis(limit_cut, beta);

    double prev_diff = 1e30;
    std::vector<double> diffs;
    for (double w : {0.1, 0.05, 0.025, 0.0125}) {
        const SubdomainGeometry geom = testing::make_strip_geometry(0.4, 1.0 - w);
        const ElementCut cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
        REQUIRE(cut.cls == CutClass::TwoInterface);
        const LocalBasis basis = build_nodal_basis(cut, beta);
        // compare the pieces labeled 1 and 2 against the limit basis
        double diff = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
                const int region = cut.pieces[pi].region;
                if (region == 3) continue;
                std::size_t qi = 0;
                while (limit_cut.pieces[qi].region != region) ++qi;
                const PieceCoeffs& a = basis.nodal[static_cast<std::size_t>(i)][pi];
                const PieceCoeffs& b = limit_basis.nodal[static_cast<std::size_t>(i)][qi];
                diff = std::max({diff, std::abs(a.a - b.a), std::abs(a.b - b.b),
                                 std::abs(a.c - b.c), std::abs(a.d - b.d)});
            }
        }
        CHECK(diff < prev_diff);
        prev_diff = diff;
        diffs.push_back(diff);
    }
    CHECK(diffs.back() < 0.25 * diffs.front());
    CHECK(diffs.back() < 0.05);
}

TEST_CASE("gradient is continuous across a segment with equal coefficients") {
    const SubdomainGeometry geom = testing::make_strip_geometry(0.4, 0.7);
    const ElementCut cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
    const LocalBasis basis = build_local_basis(cut, {4.0, 4.0, 9.0});
    // interface 3 separates subdomains 1 and 2 where beta matches
    for (const CutSegment& seg : cut.segments) {
        if (seg.interface_id != 3) continue;
        for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const Point p = seg.a + t * (seg.b - seg.a);
            for (int i = 0; i < 4; ++i) {
                const EvalResult m =
                    evaluate_on_piece(basis, {BasisSelector::Nodal, i}, seg.piece_minus, p);
                const EvalResult pl =
                    evaluate_on_piece(basis, {BasisSelector::Nodal, i}, seg.piece_plus, p);
                CHECK(std::abs(m.value - pl.value) < 1e-9);
                CHECK(norm(m.grad - pl.grad) < 1e-9);
            }
        }
    }
}

TEST_CASE("values are continuous along one- and two-interface chords") {
    for (int kind : {0, 1}) {
        for (int rep = 0; rep < 3; ++rep) {
            const SubdomainGeometry geom = random_cut_geometry(kind);
            ElementCut cut;
            try {
                cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
            } catch (const Error&) {
                continue;
            }
            if (cut.cls == CutClass::Regular) continue;
            const LocalBasis basis = build_local_basis(cut, random_beta());
            for (const CutSegment& seg : cut.segments) {
                for (double t : {0.15, 0.5, 0.85}) {
                    const Point p = seg.a + t * (seg.b - seg.a);
                    const Point plus = p + 1e-8 * seg.normal;
                    const Point minus = p - 1e-8 * seg.normal;
                    for (int i = 0; i < 4; ++i) {
                        const double vp = evaluate(basis, {BasisSelector::Nodal, i}, plus).value;
                        const double vm = evaluate(basis, {BasisSelector::Nodal, i}, minus).value;
                        CHECK(std::abs(vp - vm) < 1e-6);
                    }
                    for (int k = 0; k < basis.flux_count(); ++k) {
                        const double vp = evaluate(basis, {BasisSelector::Flux, k}, plus).value;
                        const double vm = evaluate(basis, {BasisSelector::Flux, k}, minus).value;
                        CHECK(std::abs(vp - vm) < 1e-6);
                    }
                }
            }
        }
    }
}

TEST_CASE("partition of unity at random points on 200 randomized cut elements") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int built = 0;
    int attempts = 0;
    while (built < 200 && attempts < 1000) {
        ++attempts;
        const SubdomainGeometry geom = random_cut_geometry(attempts % 3);
        ElementCut cut;
        try {
            cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
        } catch (const Error&) {
            continue;
        }
        if (cut.cls == CutClass::Regular) continue;
        const LocalBasis basis = build_local_basis(cut, random_beta());
        CHECK(basis.condition_residual < 1e-10);
        check_partition_of_unity(cut, basis);
        ++built;
        for (int s = 0; s < 100; ++s) {
            const Point p{u(rng), u(rng)};
            double sum = 0.0;
            Point gsum{0.0, 0.0};
            for (int i = 0; i < 4; ++i) {
                const EvalResult r = evaluate(basis, {BasisSelector::Nodal, i}, p);
                sum += r.value;
                gsum = gsum + r.grad;
            }
            CHECK(std::abs(sum - 1.0) < 1e-11);
            CHECK(norm(gsum) < 1e-10);
        }
    }
    CHECK(built == 200);
}

TEST_CASE("mirror symmetry maps the basis to its pullback") {
    const SubdomainGeometry geom = testing::make_chord_geometry(2, 0.8, 0.6, 0.7);
    const Rect rect{0.0, 0.0, 1.0, 1.0};
    const ElementCut cut = cut_element(geom, rect);
    REQUIRE(cut.cls == CutClass::OneInterface);
    const std::array<double, 3> beta{3.0, 1.5, 8.0};
    const LocalBasis basis = build_local_basis(cut, beta);

    // mirrored geometry x -> -x on the mirrored element
    const SubdomainGeometry mirrored = testing::make_chord_geometry(2, -0.8, 0.6, 0.7);
    const Rect mrect{-1.0, 0.0, 0.0, 1.0};
    const ElementCut mcut = cut_element(mirrored, mrect);
    REQUIRE(mcut.cls == CutClass::OneInterface);
    const LocalBasis mbasis = build_local_basis(mcut, beta);

    const int mirror_node[4] = {1, 0, 3, 2};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 50; ++s) {
        const Point p{u(rng), u(rng)};
        const Point mp{-p.x, p.y};
        for (int i = 0; i < 4; ++i) {
            const double v = evaluate(basis, {BasisSelector::Nodal, i}, p).value;
            const double mv =
                evaluate(mbasis, {BasisSelector::Nodal, mirror_node[i]}, mp).value;
            CHECK(std::abs(v - mv) < 1e-10);
        }
    }
}

TEST_CASE("evaluate returns the bilinear value and gradient") {
    SubdomainGeometry geom = testing::make_chord_geometry(3, 1.0, 0.0, 50.0);
    const ElementCut cut = cut_element(geom, {0.0, 0.0, 1.0, 1.0});
    const LocalBasis basis = build_local_basis(cut, {1.0, 1.0, 1.0});
    const EvalResult r = evaluate(basis, {BasisSelector::Nodal, 0}, {0.0, 0.0});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.grad.x == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.grad.y == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_THROWS_AS(evaluate(basis, {BasisSelector::Nodal, 0}, {2.0, 2.0}), PointOutsideElement);
}

TEST_CASE("all condition residuals stay small on the built-in meshes") {
    for (int which : {1, 2}) {
        const ProblemSpec spec = make_example(which, {10.0, 1.0, 100.0});
        const CartesianMesh mesh = build_mesh(spec.domain, 16, spec.geom);
        const std::vector<LocalBasis> bases = build_bases(mesh, spec.beta);
        for (const LocalBasis& basis : bases) {
            CHECK(basis.condition_residual < 1e-10);
            check_partition_of_unity(*basis.cut, basis);
        }
    }
}
