#pragma once

#include <array>
#include <vector>

#include "ppifem/geometry.hpp"

namespace ppifem {

/// One bilinear piece a + b x + c y + d xy.
struct PieceCoeffs {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    double value(Point p) const { return a + b * p.x + c * p.y + d * p.x * p.y; }
    Point gradient(Point p) const { return {b + d * p.y, c + d * p.x}; }
};

struct BasisSelector {
    enum Kind { Nodal, Flux };
    Kind kind = Nodal;
    int index = 0;
};

/// Piecewise-bilinear local basis on one element: the four nodal functions
/// and, on interface elements, one flux-jump function per interface segment.
/// Coefficients are indexed [function][piece]; pieces follow cut->pieces.
/// The referenced ElementCut must outlive the basis.
struct LocalBasis {
    const ElementCut* cut = nullptr;
    std::array<double, 3> beta{1.0, 1.0, 1.0};
    std::array<std::vector<PieceCoeffs>, 4> nodal;
    std::vector<std::vector<PieceCoeffs>> flux;
    double condition_residual = 0.0;

    int piece_count() const { return static_cast<int>(cut->pieces.size()); }
    int flux_count() const { return static_cast<int>(flux.size()); }

    const PieceCoeffs& coeffs(BasisSelector s, int piece) const {
        return s.kind == BasisSelector::Nodal
                   ? nodal[static_cast<std::size_t>(s.index)][static_cast<std::size_t>(piece)]
                   : flux[static_cast<std::size_t>(s.index)][static_cast<std::size_t>(piece)];
    }
};

/// Solves the nodal condition system: Kronecker values at the four corners,
/// value continuity at the segment endpoints (and the junction point), the
/// xy-coefficient coupling on one- and two-interface cuts, and a vanishing
/// integral flux jump across every segment.
LocalBasis build_nodal_basis(const ElementCut& cut, const std::array<double, 3>& beta);

/// Adds the flux-jump functions: same continuity structure, zero at all four
/// corners, unit integral flux jump on their own segment and zero on the
/// others. One function per cut segment.
void build_flux_basis(const ElementCut& cut, const std::array<double, 3>& beta, LocalBasis& basis);

/// Nodal plus flux parts in one call.
LocalBasis build_local_basis(const ElementCut& cut, const std::array<double, 3>& beta);

struct EvalResult {
    double value = 0.0;
    Point grad;
};

/// Locates the piece containing p (centroid-nudged on ties) and evaluates.
EvalResult evaluate(const LocalBasis& basis, BasisSelector which, Point p);

/// Evaluates a specific piece polynomial (one-sided traces, quadrature).
inline EvalResult evaluate_on_piece(const LocalBasis& basis, BasisSelector which, int piece,
                                    Point p) {
    const PieceCoeffs& c = basis.coeffs(which, piece);
    return {c.value(p), c.gradient(p)};
}

}  // namespace ppifem
