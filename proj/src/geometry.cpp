#include "ppifem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ppifem/errors.hpp"

namespace ppifem {

SubdomainGeometry::SubdomainGeometry(std::array<ScalarField, 3> level_sets, SignRule rule)
    : phi_(std::move(level_sets)), rule_(std::move(rule)) {}

void SubdomainGeometry::set_gradients(std::array<VectorField, 3> grads) {
    grad_ = std::move(grads);
}

double SubdomainGeometry::level(int interface, Point p) const {
    return phi_[static_cast<std::size_t>(interface - 1)](p);
}

Point SubdomainGeometry::level_gradient(int interface, Point p) const {
    const auto& g = grad_[static_cast<std::size_t>(interface - 1)];
    if (g) return g(p);
    const double h = 1e-7;
    const auto& f = phi_[static_cast<std::size_t>(interface - 1)];
    return {(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2.0 * h),
            (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2.0 * h)};
}

int SubdomainGeometry::classify_impl(Point p, bool* ambiguous) const {
    std::array<int, 3> signs{};
    int zero_idx[3];
    int n_zero = 0;
    for (int i = 0; i < 3; ++i) {
        const double v = phi_[static_cast<std::size_t>(i)](p);
        signs[static_cast<std::size_t>(i)] = v > tol_ ? 1 : (v < -tol_ ? -1 : 0);
        if (signs[static_cast<std::size_t>(i)] == 0) zero_idx[n_zero++] = i;
    }
    *ambiguous = false;
    if (n_zero == 0) return rule_(signs);

    // Try every resolution of the uncertain signs; if they all agree the
    // point is merely near an inactive part of a zero set.
    int region = 0;
    for (int mask = 0; mask < (1 << n_zero); ++mask) {
        std::array<int, 3> s = signs;
        for (int z = 0; z < n_zero; ++z)
            s[static_cast<std::size_t>(zero_idx[z])] = (mask & (1 << z)) ? -1 : 1;
        const int r = rule_(s);
        if (mask == 0) {
            region = r;
        } else if (r != region) {
            *ambiguous = true;
            return region;  // first-resolution result for the tolerant path
        }
    }
    return region;
}

int SubdomainGeometry::classify(Point p) const {
    bool ambiguous = false;
    const int r = classify_impl(p, &ambiguous);
    if (ambiguous) {
        std::ostringstream os;
        os << "classify: point (" << p.x << ", " << p.y << ") lies on an interface";
        throw AmbiguousPoint(os.str());
    }
    return r;
}

int SubdomainGeometry::classify_tolerant(Point p) const {
    bool ambiguous = false;
    return classify_impl(p, &ambiguous);
}

namespace {

constexpr int kScanIntervals = 64;
constexpr double kTParamTol = 1e-13;
constexpr double kEdgeInset = 1e-9;   // keeps scan samples off the corners
Point lerp(Point a, Point b, double t) {
    return {(1.0 - t) * a.x + t * b.x, (1.0 - t) * a.y + t * b.y};
}

// First region change in (lo, hi], assuming region(lo) == r_lo and
// region(hi) != r_lo. Bisection on the classification itself, so it stays
// correct when several level sets vanish nearby.
double locate_region_change(const SubdomainGeometry& geom, Point a, Point b, double lo, double hi,
                            int r_lo) {
    while (hi - lo > kTParamTol) {
        const double mid = 0.5 * (lo + hi);
        if (geom.classify_tolerant(lerp(a, b, mid)) == r_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Strict classification at increasing parameter offsets from t_start; points
// inside the on-surface tolerance band are ambiguous and must be skipped.
struct ProbedRegion {
    int region;
    double t;
};

ProbedRegion classify_beyond(const SubdomainGeometry& geom, Point a, Point b, double t_start,
                             double t_limit) {
    double w = 16.0 * kTParamTol;
    for (;;) {
        const double t = std::min(t_limit, t_start + w);
        try {
            return {geom.classify(lerp(a, b, t)), t};
        } catch (const AmbiguousPoint&) {
            if (t >= t_limit)
                throw HypothesisViolation(
                    "edge crossing could not be separated from its neighbour");
            w *= 4.0;
        }
    }
}

void collect_changes(const SubdomainGeometry& geom, Point a, Point b, double lo, double hi,
                     int r_lo, int r_hi, double probe_limit, std::vector<EdgeCrossing>& out) {
    if (r_lo == r_hi) return;
    const double t = locate_region_change(geom, a, b, lo, hi, r_lo);
    // The probe may step past hi (the crossing can sit exactly on a scan
    // sample); just beyond it the region is the next bracket's anyway.
    const ProbedRegion after = classify_beyond(geom, a, b, t, probe_limit);
    EdgeCrossing c;
    c.t = t;
    c.p = lerp(a, b, t);
    c.region_before = r_lo;
    c.region_after = after.region;
    if (after.region == r_lo)
        throw HypothesisViolation("edge crossing could not be separated from its neighbour");
    c.interface_id = SubdomainGeometry::interface_between(r_lo, after.region);
    out.push_back(c);
    if (after.region != r_hi && after.t < hi)
        collect_changes(geom, a, b, after.t, hi, after.region, r_hi, probe_limit, out);
}

}  // namespace

std::vector<EdgeCrossing> edge_region_crossings(const SubdomainGeometry& geom, Point a, Point b) {
    std::vector<double> ts;
    ts.reserve(kScanIntervals + 1);
    ts.push_back(kEdgeInset);
    for (int k = 1; k < kScanIntervals; ++k)
        ts.push_back(static_cast<double>(k) / kScanIntervals);
    ts.push_back(1.0 - kEdgeInset);

    std::vector<EdgeCrossing> out;
    int r_prev = geom.classify_tolerant(lerp(a, b, ts.front()));
    for (std::size_t k = 1; k < ts.size(); ++k) {
        const int r = geom.classify_tolerant(lerp(a, b, ts[k]));
        if (r != r_prev) collect_changes(geom, a, b, ts[k - 1], ts[k], r_prev, r, 1.0, out);
        r_prev = r;
    }
    return out;
}

std::vector<double> edge_intersection_params(const SubdomainGeometry& geom, int interface, Point a,
                                             Point b) {
    auto f = [&](double t) { return geom.level(interface, lerp(a, b, t)); };
    std::vector<double> roots;
    double t_prev = 0.0;
    double f_prev = f(0.0);
    for (int k = 1; k <= kScanIntervals; ++k) {
        const double t = static_cast<double>(k) / kScanIntervals;
        const double ft = f(t);
        if (f_prev == 0.0) {
            if (t_prev > 0.0) roots.push_back(t_prev);
        } else if (ft != 0.0 && ((f_prev < 0.0) != (ft < 0.0))) {
            double lo = t_prev, hi = t, flo = f_prev;
            while (hi - lo > kTParamTol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        t_prev = t;
        f_prev = ft;
    }
    if (roots.size() > 2) {
        throw HypothesisViolation("edge intersects a level set at more than two points (H2)");
    }
    return roots;
}

std::vector<Point> edge_intersections(const SubdomainGeometry& geom, int interface, Point a,
                                      Point b) {
    std::vector<Point> pts;
    for (double t : edge_intersection_params(geom, interface, a, b)) pts.push_back(lerp(a, b, t));
    return pts;
}

namespace {

struct NewtonResult {
    Point p;
    bool converged = false;
};

NewtonResult newton_triple_point(const SubdomainGeometry& geom, Point start) {
    auto residual = [&](Point q) {
        return std::abs(geom.level(1, q)) + std::abs(geom.level(2, q));
    };
    Point x = start;
    double res = residual(x);
    for (int it = 0; it < 50; ++it) {
        if (res < 1e-12) return {x, true};
        const Point g1 = geom.level_gradient(1, x);
        const Point g2 = geom.level_gradient(2, x);
        const double det = g1.x * g2.y - g1.y * g2.x;
        if (std::abs(det) < 1e-30) return {x, false};
        const double f1 = geom.level(1, x);
        const double f2 = geom.level(2, x);
        Point dx = {(f1 * g2.y - f2 * g1.y) / det, (f2 * g1.x - f1 * g2.x) / det};
        Point next = x - dx;
        double next_res = residual(next);
        int halvings = 0;
        while (next_res > res && halvings < 40) {
            dx = 0.5 * dx;
            next = x - dx;
            next_res = residual(next);
            ++halvings;
        }
        x = next;
        res = next_res;
    }
    return {x, res < 1e-12};
}

// Loop vertex of the element boundary walk: corners and crossings in
// counter-clockwise order. Loop coordinate = edge index + t along it.
struct LoopVertex {
    Point p;
    double coord = 0.0;
    int crossing = -1;  // index into the crossing list, -1 for a plain corner
};

int find_vertex(const std::vector<LoopVertex>& poly, int crossing) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (poly[i].crossing == crossing) return static_cast<int>(i);
    return -1;
}

// Splits the polygon along the chord between two of its vertices.
std::pair<std::vector<LoopVertex>, std::vector<LoopVertex>> split_by_chord(
    const std::vector<LoopVertex>& poly, int ia, int ib) {
    const int n = static_cast<int>(poly.size());
    std::vector<LoopVertex> first, second;
    for (int i = ia;; i = (i + 1) % n) {
        first.push_back(poly[static_cast<std::size_t>(i)]);
        if (i == ib) break;
    }
    for (int i = ib;; i = (i + 1) % n) {
        second.push_back(poly[static_cast<std::size_t>(i)]);
        if (i == ia) break;
    }
    return {std::move(first), std::move(second)};
}

CutSegment make_segment(int interface_id, Point a, Point b) {
    CutSegment s;
    s.interface_id = interface_id;
    s.a = a;
    s.b = b;
    return s;
}

Polygon strip(const std::vector<LoopVertex>& v) {
    Polygon poly;
    poly.reserve(v.size());
    for (const LoopVertex& lv : v) poly.push_back(lv.p);
    return poly;
}

}  // namespace

int ElementCut::find_piece(Point p) const {
    const double tol = 1e-12 * rect.diameter();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (locate_in_polygon(pieces[i].poly, p, tol) == PointLocation::Inside)
            return static_cast<int>(i);
    }
    // Boundary point: nudge toward a candidate piece centroid to break the tie.
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (locate_in_polygon(pieces[i].poly, p, tol) != PointLocation::Boundary) continue;
        const Point c = pieces[i].centroid;
        const double d = dist(c, p);
        if (d == 0.0) return static_cast<int>(i);
        const Point q = p + (1e-9 * rect.diameter() / d) * (c - p);
        if (locate_in_polygon(pieces[i].poly, q, 0.0) == PointLocation::Inside)
            return static_cast<int>(i);
    }
    std::ostringstream os;
    os << "find_piece: point (" << p.x << ", " << p.y << ") is outside the element";
    throw PointOutsideElement(os.str());
}

Point locate_triple_point(const SubdomainGeometry& geom, const Rect& rect) {
    const NewtonResult nr = newton_triple_point(geom, rect.center());
    if (!nr.converged) throw NoConvergence("locate_triple_point: Newton did not converge");
    Point p = nr.p;
    const double slack = 1e-12 * rect.diameter();
    if (!rect.contains(p, slack))
        throw TriplePointOutside("locate_triple_point: root fell outside the element");
    p.x = std::clamp(p.x, rect.x0, rect.x1);
    p.y = std::clamp(p.y, rect.y0, rect.y1);
    if (std::abs(geom.level(3, p)) > 1e-8)
        throw Error("locate_triple_point: level sets are inconsistent at the triple point");
    return p;
}

ElementCut cut_element(const SubdomainGeometry& geom, const Rect& rect) {
    ElementCut cut;
    cut.rect = rect;
    const double diam = rect.diameter();

    // Boundary walk: per-edge region crossings, with near-corner crossings
    // snapped onto the corner so touching interfaces do not create slivers.
    std::array<std::vector<EdgeCrossing>, 4> edge_cr;
    std::array<int, 4> corner_cross_iface{-1, -1, -1, -1};
    for (int e = 0; e < 4; ++e) {
        const Point a = rect.corner(e);
        const Point b = rect.corner((e + 1) % 4);
        for (EdgeCrossing c : edge_region_crossings(geom, a, b)) {
            if (c.t < kSnapParam) {
                c.t = 0.0;
                c.p = a;
                corner_cross_iface[static_cast<std::size_t>(e)] = c.interface_id;
            } else if (c.t > 1.0 - kSnapParam) {
                c.t = 1.0;
                c.p = b;
                corner_cross_iface[static_cast<std::size_t>((e + 1) % 4)] = c.interface_id;
            } else {
                edge_cr[static_cast<std::size_t>(e)].push_back(c);
            }
        }
        if (edge_cr[static_cast<std::size_t>(e)].size() > 2)
            throw HypothesisViolation("element edge carries more than two interface points (H2)");
    }
    // Crossings exactly through a corner show up as a region change between
    // the inset samples of the two edges meeting there. Tolerant
    // classification keeps tangential touches (both probes resolve to the
    // same side) from being mistaken for crossings.
    for (int k = 0; k < 4; ++k) {
        if (corner_cross_iface[static_cast<std::size_t>(k)] >= 0) continue;
        const int e_prev = (k + 3) % 4;
        const Point pa = rect.corner(e_prev);
        const Point pb = rect.corner(k);
        const Point pc = rect.corner((k + 1) % 4);
        const int before = geom.classify_tolerant(lerp(pa, pb, 1.0 - kEdgeInset));
        const int after = geom.classify_tolerant(lerp(pb, pc, kEdgeInset));
        if (before != after)
            corner_cross_iface[static_cast<std::size_t>(k)] =
                SubdomainGeometry::interface_between(before, after);
    }

    // Assemble the crossing list in walk order.
    struct Crossing {
        Point p;
        double coord;  // edge + t
        int interface_id;
        int edge;
        double t;
    };
    std::vector<Crossing> crossings;
    for (int e = 0; e < 4; ++e) {
        if (corner_cross_iface[static_cast<std::size_t>(e)] >= 0)
            crossings.push_back({rect.corner(e), static_cast<double>(e),
                                 corner_cross_iface[static_cast<std::size_t>(e)], e, 0.0});
        for (const EdgeCrossing& c : edge_cr[static_cast<std::size_t>(e)])
            crossings.push_back({c.p, e + c.t, c.interface_id, e, c.t});
    }

    // An interface running exactly along one edge touches two adjacent
    // corners; the element itself is not cut.
    if (crossings.size() == 2 && crossings[0].interface_id == crossings[1].interface_id) {
        const bool same_edge_corners =
            crossings[0].t == 0.0 && crossings[1].t == 0.0 &&
            (crossings[1].edge - crossings[0].edge == 1 ||
             (crossings[0].edge == 0 && crossings[1].edge == 3));
        if (same_edge_corners) crossings.clear();
    }

    for (const Crossing& c : crossings)
        cut.cut_points.push_back({c.edge, c.t, c.p, c.interface_id});

    // Group crossings by interface.
    std::array<std::vector<int>, 3> by_iface;
    for (std::size_t i = 0; i < crossings.size(); ++i)
        by_iface[static_cast<std::size_t>(crossings[i].interface_id - 1)].push_back(
            static_cast<int>(i));
    int n_ifaces = 0;
    bool counts_ok = true;
    bool all_single = true;
    for (const auto& v : by_iface) {
        if (v.empty()) continue;
        ++n_ifaces;
        if (v.size() > 2) counts_ok = false;
        if (v.size() != 1) all_single = false;
    }
    if (!counts_ok)
        throw HypothesisViolation("an interface meets the element boundary at more than 2 points");

    // Boundary loop with crossings inserted.
    std::vector<LoopVertex> loop;
    for (int e = 0; e < 4; ++e) {
        int corner_crossing = -1;
        for (std::size_t i = 0; i < crossings.size(); ++i)
            if (crossings[i].edge == e && crossings[i].t == 0.0) corner_crossing = static_cast<int>(i);
        loop.push_back({rect.corner(e), static_cast<double>(e), corner_crossing});
        for (std::size_t i = 0; i < crossings.size(); ++i)
            if (crossings[i].edge == e && crossings[i].t > 0.0)
                loop.push_back({crossings[i].p, crossings[i].coord, static_cast<int>(i)});
    }
    std::stable_sort(loop.begin(), loop.end(),
                     [](const LoopVertex& a, const LoopVertex& b) { return a.coord < b.coord; });

    auto classify_centroid = [&](const Polygon& poly) {
        return geom.classify(polygon_centroid(poly));
    };

    std::vector<std::pair<Polygon, std::array<int, 2>>> raw_pieces;  // polygon + its chord tags
    auto finalize_chord_pieces = [&](const std::vector<std::vector<LoopVertex>>& parts) {
        for (const auto& part : parts) raw_pieces.push_back({strip(part), {-1, -1}});
    };

    if (crossings.empty()) {
        cut.cls = CutClass::Regular;
        cut.owning_region = geom.classify_tolerant(rect.center());
        Polygon whole{rect.corner(0), rect.corner(1), rect.corner(2), rect.corner(3)};
        cut.pieces.push_back({whole, cut.owning_region, polygon_area(whole),
                              polygon_centroid(whole)});
        return cut;
    }

    if (n_ifaces == 1 && crossings.size() == 2) {
        cut.cls = CutClass::OneInterface;
        const auto [p1, p2] = split_by_chord(loop, find_vertex(loop, 0), find_vertex(loop, 1));
        finalize_chord_pieces({p1, p2});
        cut.segments.push_back(make_segment(crossings[0].interface_id, crossings[0].p, crossings[1].p));
    } else if (n_ifaces == 2 && crossings.size() == 4) {
        cut.cls = CutClass::TwoInterface;
        int first_iface = 0;
        while (by_iface[static_cast<std::size_t>(first_iface)].empty()) ++first_iface;
        int second_iface = first_iface + 1;
        while (by_iface[static_cast<std::size_t>(second_iface)].empty()) ++second_iface;
        const auto& ca = by_iface[static_cast<std::size_t>(first_iface)];
        const auto& cb = by_iface[static_cast<std::size_t>(second_iface)];
        auto [p1, p2] = split_by_chord(loop, find_vertex(loop, ca[0]), find_vertex(loop, ca[1]));
        auto& host = (find_vertex(p1, cb[0]) >= 0 && find_vertex(p1, cb[1]) >= 0) ? p1 : p2;
        if (find_vertex(host, cb[0]) < 0 || find_vertex(host, cb[1]) < 0)
            throw HypothesisViolation("two interface chords cross inside one element");
        auto [p3, p4] = split_by_chord(host, find_vertex(host, cb[0]), find_vertex(host, cb[1]));
        finalize_chord_pieces({(&host == &p1) ? p2 : p1, p3, p4});
        cut.segments.push_back(make_segment(first_iface + 1,
                                            crossings[static_cast<std::size_t>(ca[0])].p,
                                            crossings[static_cast<std::size_t>(ca[1])].p));
        cut.segments.push_back(make_segment(second_iface + 1,
                                            crossings[static_cast<std::size_t>(cb[0])].p,
                                            crossings[static_cast<std::size_t>(cb[1])].p));
    } else if (all_single && (n_ifaces == 3 || n_ifaces == 2)) {
        // Either a genuine triple-junction element or the junction sits on the
        // element boundary; the Newton-located junction point decides.
        const NewtonResult nr = newton_triple_point(geom, rect.center());
        if (!nr.converged)
            throw HypothesisViolation("triple-point location failed on a junction element");
        const Point P = nr.p;
        if (!rect.contains(P, 1e-7 * diam))
            throw TriplePointOutside("cut_element: junction point outside its candidate element");
        const bool on_boundary = rect.boundary_distance(P) <= 1e-7 * diam;

        if (!on_boundary) {
            if (n_ifaces != 3)
                throw HypothesisViolation("interior triple point but not three interface chords");
            cut.cls = CutClass::TripleJunction;
            cut.triple_point = P;
            // Pieces are the sectors between consecutive crossings, closed by P.
            std::vector<int> order(crossings.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return crossings[static_cast<std::size_t>(a)].coord <
                       crossings[static_cast<std::size_t>(b)].coord;
            });
            for (int s = 0; s < 3; ++s) {
                const int ga = order[static_cast<std::size_t>(s)];
                const int gb = order[static_cast<std::size_t>((s + 1) % 3)];
                std::vector<LoopVertex> part;
                const int ia = find_vertex(loop, ga);
                const int n = static_cast<int>(loop.size());
                for (int i = ia;; i = (i + 1) % n) {
                    part.push_back(loop[static_cast<std::size_t>(i)]);
                    if (loop[static_cast<std::size_t>(i)].crossing == gb) break;
                }
                part.push_back({P, -1.0, -2});
                raw_pieces.push_back({strip(part), {-1, -1}});
            }
            for (std::size_t i = 0; i < crossings.size(); ++i)
                cut.segments.push_back(make_segment(crossings[i].interface_id, crossings[i].p, P));
        } else {
            cut.cls = CutClass::TwoInterface;
            cut.triple_point = P;
            // The crossing carried by the "third" interface is the junction
            // point itself; the two real chords end there.
            int p_idx = 0;
            double best = std::numeric_limits<double>::max();
            for (std::size_t i = 0; i < crossings.size(); ++i) {
                const double d = dist(crossings[i].p, P);
                if (d < best) {
                    best = d;
                    p_idx = static_cast<int>(i);
                }
            }
            if (best > 1e-6 * diam)
                throw HypothesisViolation("boundary junction does not match any boundary crossing");
            std::vector<int> others;
            for (std::size_t i = 0; i < crossings.size(); ++i)
                if (static_cast<int>(i) != p_idx) others.push_back(static_cast<int>(i));
            if (others.size() != 2)
                throw HypothesisViolation("unsupported boundary-junction configuration");
            const Point Pb = crossings[static_cast<std::size_t>(p_idx)].p;
            auto [p1, p2] = split_by_chord(loop, find_vertex(loop, others[0]),
                                           find_vertex(loop, p_idx));
            auto& host = (find_vertex(p1, others[1]) >= 0 && find_vertex(p1, p_idx) >= 0) ? p1 : p2;
            auto [p3, p4] = split_by_chord(host, find_vertex(host, others[1]),
                                           find_vertex(host, p_idx));
            finalize_chord_pieces({(&host == &p1) ? p2 : p1, p3, p4});
            cut.segments.push_back(
                make_segment(crossings[static_cast<std::size_t>(others[0])].interface_id,
                             crossings[static_cast<std::size_t>(others[0])].p, Pb));
            cut.segments.push_back(
                make_segment(crossings[static_cast<std::size_t>(others[1])].interface_id,
                             crossings[static_cast<std::size_t>(others[1])].p, Pb));
        }
    } else {
        std::ostringstream os;
        os << "cut_element: unsupported crossing pattern (" << crossings.size() << " points on "
           << n_ifaces << " interfaces)";
        throw HypothesisViolation(os.str());
    }

    // Label pieces and validate.
    double area_sum = 0.0;
    for (auto& [poly, tags] : raw_pieces) {
        (void)tags;
        CutPiece piece;
        piece.poly = poly;
        piece.area = polygon_area(poly);
        piece.centroid = polygon_centroid(poly);
        if (piece.area < kAreaEpsilon * rect.area())
            throw DegenerateCut("cut_element: piece area below the degeneracy threshold");
        piece.region = classify_centroid(poly);
        area_sum += piece.area;
        cut.pieces.push_back(std::move(piece));
    }
    if (std::abs(area_sum - rect.area()) > 1e-9 * rect.area())
        throw Error("cut_element: piece areas do not sum to the element area");

    // Segment adjacency and minus->plus normals.
    for (CutSegment& seg : cut.segments) {
        int adj[2] = {-1, -1};
        int n_adj = 0;
        for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
            const Polygon& poly = cut.pieces[pi].poly;
            const std::size_t n = poly.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Point& u = poly[i];
                const Point& v = poly[(i + 1) % n];
                const bool fwd = u.x == seg.a.x && u.y == seg.a.y && v.x == seg.b.x && v.y == seg.b.y;
                const bool rev = u.x == seg.b.x && u.y == seg.b.y && v.x == seg.a.x && v.y == seg.a.y;
                if (fwd || rev) {
                    if (n_adj < 2) adj[n_adj] = static_cast<int>(pi);
                    ++n_adj;
                    break;
                }
            }
        }
        if (n_adj != 2) throw Error("cut_element: segment is not shared by exactly two pieces");
        const int minus_label = SubdomainGeometry::minus_region(seg.interface_id);
        const int plus_label = SubdomainGeometry::plus_region(seg.interface_id);
        const int r0 = cut.pieces[static_cast<std::size_t>(adj[0])].region;
        const int r1 = cut.pieces[static_cast<std::size_t>(adj[1])].region;
        if (r0 == minus_label && r1 == plus_label) {
            seg.piece_minus = adj[0];
            seg.piece_plus = adj[1];
        } else if (r0 == plus_label && r1 == minus_label) {
            seg.piece_minus = adj[1];
            seg.piece_plus = adj[0];
        } else {
            throw HypothesisViolation(
                "cut_element: pieces adjacent to a segment carry the wrong subdomain labels");
        }
        const Point dir = seg.b - seg.a;
        const double len = norm(dir);
        if (len == 0.0) throw DegenerateCut("cut_element: zero-length segment");
        Point n{-dir.y / len, dir.x / len};
        const Point to_plus = cut.pieces[static_cast<std::size_t>(seg.piece_plus)].centroid -
                              cut.pieces[static_cast<std::size_t>(seg.piece_minus)].centroid;
        if (dot(n, to_plus) < 0.0) n = -1.0 * n;
        seg.normal = n;
    }
    return cut;
}

}  // namespace ppifem
