#include "ppifem/basis.hpp"

#include <Eigen/Dense>
#include <sstream>

#include "ppifem/errors.hpp"

namespace ppifem {

namespace {

// The defining conditions form one square matrix per element; the nodal and
// flux functions only differ in their right-hand sides.
struct ConditionSystem {
    Eigen::MatrixXd M;
    std::array<int, 4> nodal_row{};
    std::vector<int> flux_row;
};

int piece_of_corner(const ElementCut& cut, Point corner) {
    for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi)
        for (const Point& v : cut.pieces[pi].poly)
            if (v.x == corner.x && v.y == corner.y) return static_cast<int>(pi);
    throw Error("basis: element corner is not a vertex of any piece");
}

ConditionSystem build_conditions(const ElementCut& cut, const std::array<double, 3>& beta) {
    const int m = static_cast<int>(cut.pieces.size());
    const int k = 4 * m;
    ConditionSystem sys;
    sys.M = Eigen::MatrixXd::Zero(k, k);
    int row = 0;

    auto value_cols = [&](int piece, Point p, double sign) {
        const int c0 = 4 * piece;
        sys.M(row, c0 + 0) += sign;
        sys.M(row, c0 + 1) += sign * p.x;
        sys.M(row, c0 + 2) += sign * p.y;
        sys.M(row, c0 + 3) += sign * p.x * p.y;
    };

    for (int j = 0; j < 4; ++j) {
        const Point corner = cut.rect.corner(j);
        sys.nodal_row[static_cast<std::size_t>(j)] = row;
        value_cols(piece_of_corner(cut, corner), corner, 1.0);
        ++row;
    }

    const bool triple = cut.cls == CutClass::TripleJunction;
    for (std::size_t s = 0; s < cut.segments.size(); ++s) {
        const CutSegment& seg = cut.segments[s];
        value_cols(seg.piece_minus, seg.a, 1.0);
        value_cols(seg.piece_plus, seg.a, -1.0);
        ++row;
        // On triple-junction elements the three conditions at P are linearly
        // dependent; the first two span them.
        if (!triple || s < 2) {
            value_cols(seg.piece_minus, seg.b, 1.0);
            value_cols(seg.piece_plus, seg.b, -1.0);
            ++row;
        }
    }

    if (!triple) {
        for (const CutSegment& seg : cut.segments) {
            sys.M(row, 4 * seg.piece_minus + 3) = 1.0;
            sys.M(row, 4 * seg.piece_plus + 3) = -1.0;
            ++row;
        }
    }

    // Integral flux jump across each segment: the integrand is linear along
    // the straight segment, so midpoint times length is exact.
    for (const CutSegment& seg : cut.segments) {
        sys.flux_row.push_back(row);
        const double len = dist(seg.a, seg.b);
        const Point mid = 0.5 * (seg.a + seg.b);
        const Point nrm = seg.normal;
        const double bplus = beta[static_cast<std::size_t>(
            cut.pieces[static_cast<std::size_t>(seg.piece_plus)].region - 1)];
        const double bminus = beta[static_cast<std::size_t>(
            cut.pieces[static_cast<std::size_t>(seg.piece_minus)].region - 1)];
        auto flux_cols = [&](int piece, double bcoef) {
            const int c0 = 4 * piece;
            sys.M(row, c0 + 1) += bcoef * nrm.x * len;
            sys.M(row, c0 + 2) += bcoef * nrm.y * len;
            sys.M(row, c0 + 3) += bcoef * (nrm.x * mid.y + nrm.y * mid.x) * len;
        };
        flux_cols(seg.piece_plus, bplus);
        flux_cols(seg.piece_minus, -bminus);
        ++row;
    }

    if (row != k) throw Error("basis: condition count does not match unknown count");
    return sys;
}

struct FactoredSystem {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::MatrixXd M_scaled;
    Eigen::VectorXd row_scale;
};

FactoredSystem factor(const ConditionSystem& sys) {
    const auto k = sys.M.rows();
    FactoredSystem f;
    f.row_scale = Eigen::VectorXd::Ones(k);
    f.M_scaled = sys.M;
    for (Eigen::Index r = 0; r < k; ++r) {
        const double s = sys.M.row(r).cwiseAbs().maxCoeff();
        if (s > 0.0) {
            f.row_scale(r) = 1.0 / s;
            f.M_scaled.row(r) *= f.row_scale(r);
        }
    }
    f.lu.compute(f.M_scaled);
    const double pivot_floor = 1e-12 * f.M_scaled.cwiseAbs().maxCoeff();
    if (f.lu.matrixLU().diagonal().cwiseAbs().minCoeff() < pivot_floor)
        throw SingularLocalSystem("basis: local condition system is rank deficient");
    return f;
}

std::vector<PieceCoeffs> unpack(const Eigen::VectorXd& x, int pieces) {
    std::vector<PieceCoeffs> out(static_cast<std::size_t>(pieces));
    for (int p = 0; p < pieces; ++p)
        out[static_cast<std::size_t>(p)] = {x(4 * p + 0), x(4 * p + 1), x(4 * p + 2), x(4 * p + 3)};
    return out;
}

}  // namespace

LocalBasis build_nodal_basis(const ElementCut& cut, const std::array<double, 3>& beta) {
    for (double b : beta)
        if (!(b > 0.0)) throw Error("basis: diffusion coefficients must be positive");
    LocalBasis basis;
    basis.cut = &cut;
    basis.beta = beta;

    const ConditionSystem sys = build_conditions(cut, beta);
    const FactoredSystem f = factor(sys);
    const int m = static_cast<int>(cut.pieces.size());

    double residual = 0.0;
    for (int i = 0; i < 4; ++i) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * m);
        rhs(sys.nodal_row[static_cast<std::size_t>(i)]) =
            f.row_scale(sys.nodal_row[static_cast<std::size_t>(i)]);
        const Eigen::VectorXd x = f.lu.solve(rhs);
        residual = std::max(residual, (f.M_scaled * x - rhs).cwiseAbs().maxCoeff());
        basis.nodal[static_cast<std::size_t>(i)] = unpack(x, m);
    }
    basis.condition_residual = residual;
    return basis;
}

void build_flux_basis(const ElementCut& cut, const std::array<double, 3>& beta,
                      LocalBasis& basis) {
    if (cut.segments.empty()) return;
    const ConditionSystem sys = build_conditions(cut, beta);
    const FactoredSystem f = factor(sys);
    const int m = static_cast<int>(cut.pieces.size());

    basis.flux.clear();
    double residual = basis.condition_residual;
    for (std::size_t kf = 0; kf < cut.segments.size(); ++kf) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * m);
        rhs(sys.flux_row[kf]) = f.row_scale(sys.flux_row[kf]);
        const Eigen::VectorXd x = f.lu.solve(rhs);
        residual = std::max(residual, (f.M_scaled * x - rhs).cwiseAbs().maxCoeff());
        basis.flux.push_back(unpack(x, m));
    }
    basis.condition_residual = residual;
}

LocalBasis build_local_basis(const ElementCut& cut, const std::array<double, 3>& beta) {
    LocalBasis basis = build_nodal_basis(cut, beta);
    build_flux_basis(cut, beta, basis);
    return basis;
}

EvalResult evaluate(const LocalBasis& basis, BasisSelector which, Point p) {
    if (!basis.cut->rect.contains(p, 1e-12 * basis.cut->rect.diameter()))
        throw PointOutsideElement("evaluate: point outside the element");
    const int piece = basis.cut->find_piece(p);
    return evaluate_on_piece(basis, which, piece, p);
}

}  // namespace ppifem
