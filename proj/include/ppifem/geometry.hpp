#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "ppifem/core.hpp"

namespace ppifem {

/// Three subdomains (1..3) separated by three interfaces (1..3). Interface i
/// separates the two subdomains other than i; its jump bracket is oriented
/// so that minus_region(i) -> plus_region(i):
///   interface 1: jump = (value in 3) - (value in 2)
///   interface 2: jump = (value in 1) - (value in 3)
///   interface 3: jump = (value in 2) - (value in 1)
/// Each interface is carried by the zero set of its level set; which part of
/// that zero set is active follows from the subdomain map (a region change
/// across the zero set), so rays/arcs need no extra bookkeeping.
class SubdomainGeometry {
  public:
    using ScalarField = std::function<double(Point)>;
    using VectorField = std::function<Point(Point)>;
    /// Maps the level-set sign vector (entries in {-1,+1}) to a subdomain 1..3.
    using SignRule = std::function<int(const std::array<int, 3>&)>;

    SubdomainGeometry(std::array<ScalarField, 3> level_sets, SignRule rule);

    void set_gradients(std::array<VectorField, 3> grads);

    /// Level-set value of interface i (1-based) at p.
    double level(int interface, Point p) const;

    /// Analytic gradient when provided, central finite differences otherwise.
    Point level_gradient(int interface, Point p) const;

    /// Subdomain index of p. Signs within on_surface_tol of zero are tried
    /// both ways; if the rule disagrees between them, p sits on an active
    /// interface and AmbiguousPoint is thrown.
    int classify(Point p) const;

    /// Like classify, but resolves genuine ambiguity to one adjacent
    /// subdomain (deterministically) instead of throwing. Intended for
    /// points where the queried quantity is continuous across interfaces.
    int classify_tolerant(Point p) const;

    double on_surface_tol() const { return tol_; }
    void set_on_surface_tol(double tol) { tol_ = tol; }

    static int minus_region(int interface) { return interface % 3 + 1; }
    static int plus_region(int interface) { return (interface + 1) % 3 + 1; }
    /// Interface separating two distinct subdomains.
    static int interface_between(int region_a, int region_b) { return 6 - region_a - region_b; }

  private:
    int classify_impl(Point p, bool* ambiguous) const;

    std::array<ScalarField, 3> phi_;
    std::array<VectorField, 3> grad_;
    SignRule rule_;
    double tol_ = 1e-12;
};

enum class CutClass { Regular = 0, OneInterface = 1, TwoInterface = 2, TripleJunction = 3 };

/// A point where an interface crosses the element boundary.
/// edge is 0..3 (bottom, right, top, left in the CCW walk); t is the walk
/// parameter along that edge; corner crossings have t = 0 or 1 exactly.
struct CutPoint {
    int edge = -1;
    double t = 0.0;
    Point p;
    int interface_id = 0;
};

/// Straight approximation of one interface inside the element, with the two
/// adjacent pieces: piece_minus is labeled minus_region(interface_id),
/// piece_plus is labeled plus_region(interface_id). The stored unit normal
/// points from the minus piece into the plus piece.
struct CutSegment {
    int interface_id = 0;
    Point a, b;
    Point normal;
    int piece_minus = -1;
    int piece_plus = -1;
};

struct CutPiece {
    Polygon poly;  // counter-clockwise
    int region = 0;
    double area = 0.0;
    Point centroid;
};

struct ElementCut {
    CutClass cls = CutClass::Regular;
    Rect rect;
    int owning_region = 0;  // Regular elements only
    std::vector<CutPoint> cut_points;
    std::optional<Point> triple_point;
    std::vector<CutSegment> segments;
    std::vector<CutPiece> pieces;

    /// Index of the piece containing p (boundary points resolved by nudging
    /// toward piece centroids). Throws PointOutsideElement.
    int find_piece(Point p) const;
};

/// Relative piece-area floor below which a cut is considered degenerate.
inline constexpr double kAreaEpsilon = 1e-10;

/// Edge crossings within this parameter distance of a node snap onto it, so
/// interfaces that merely touch a node do not generate sliver pieces.
inline constexpr double kSnapParam = 2e-5;

/// Roots of t -> phi_interface((1-t)a + t b) on (0,1), located to 1e-13 in t
/// by bisection after a uniform 64-subinterval sign scan. At most two roots
/// may exist per edge (hypothesis H2).
std::vector<double> edge_intersection_params(const SubdomainGeometry& geom, int interface, Point a,
                                             Point b);

/// Same roots as positions on the segment.
std::vector<Point> edge_intersections(const SubdomainGeometry& geom, int interface, Point a,
                                      Point b);

/// A region change along an element edge, refined to 1e-13 in t.
struct EdgeCrossing {
    double t = 0.0;
    Point p;
    int region_before = 0;
    int region_after = 0;
    int interface_id = 0;
};

/// All subdomain changes along the open segment (a,b), in increasing t.
std::vector<EdgeCrossing> edge_region_crossings(const SubdomainGeometry& geom, Point a, Point b);

/// Classifies the element and extracts its cut geometry: boundary crossings,
/// chord segments (spokes to the triple point on triple-junction elements),
/// and the labeled sub-polygons.
ElementCut cut_element(const SubdomainGeometry& geom, const Rect& rect);

/// Newton iteration for the common root of level sets 1 and 2 from the
/// element center; |phi_1|+|phi_2| < 1e-12 at the result and |phi_3| < 1e-8
/// is asserted as a consistency check.
Point locate_triple_point(const SubdomainGeometry& geom, const Rect& rect);

}  // namespace ppifem
