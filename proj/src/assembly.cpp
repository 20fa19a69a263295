#include "ppifem/assembly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ppifem/errors.hpp"
#include "ppifem/quadrature.hpp"

namespace ppifem {

namespace {

double max_beta(const std::array<double, 3>& beta) {
    return std::max({beta[0], beta[1], beta[2]});
}

// Dense 4 x (4 + k) element block: volume gradient products of the nodal
// test functions against nodal and flux trial functions.
Eigen::MatrixXd volume_block(const ElementCut& cut, const LocalBasis& basis,
                             const std::array<double, 3>& beta, int order) {
    const int k = basis.flux_count();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4, 4 + k);
    for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
        const CutPiece& piece = cut.pieces[pi];
        const double b = beta[static_cast<std::size_t>(piece.region - 1)];
        const QuadRule rule = polygon_rule(piece.poly, order);
        for (std::size_t qp = 0; qp < rule.points.size(); ++qp) {
            const Point p = rule.points[qp];
            const double w = b * rule.weights[qp];
            Point g[4 + 3];
            for (int i = 0; i < 4; ++i)
                g[i] = basis.nodal[static_cast<std::size_t>(i)][pi].gradient(p);
            for (int t = 0; t < k; ++t)
                g[4 + t] = basis.flux[static_cast<std::size_t>(t)][pi].gradient(p);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4 + k; ++j) K(i, j) += w * dot(g[i], g[j]);
        }
    }
    return K;
}

bool edge_is_horizontal(const CartesianMesh& mesh, int eid) {
    return eid < mesh.n * (mesh.n + 1);
}

// Interior-penalty block on one interior interface edge. Rows: the 8 nodal
// test functions (element elem0 first). Columns: the same 8 nodal trial
// functions followed by the flux trial functions of elem0 then elem1.
struct EdgeBlock {
    Eigen::MatrixXd K;
    int k0 = 0, k1 = 0;
};

EdgeBlock edge_block(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases, int eid,
                     const SchemeParams& params, const std::array<double, 3>& beta) {
    const MeshEdge& edge = mesh.edges[static_cast<std::size_t>(eid)];
    const LocalBasis& b0 = bases[static_cast<std::size_t>(edge.elem0)];
    const LocalBasis& b1 = bases[static_cast<std::size_t>(edge.elem1)];
    EdgeBlock blk;
    blk.k0 = b0.flux_count();
    blk.k1 = b1.flux_count();
    const int ncols = 8 + blk.k0 + blk.k1;
    blk.K = Eigen::MatrixXd::Zero(8, ncols);

    const Point a = mesh.nodes[static_cast<std::size_t>(edge.n0)];
    const Point bpt = mesh.nodes[static_cast<std::size_t>(edge.n1)];
    const double len = dist(a, bpt);
    const Point n_e = edge_is_horizontal(mesh, eid) ? Point{0.0, 1.0} : Point{1.0, 0.0};
    const double sigma_e = params.sigma0 * max_beta(beta);
    const double eps = static_cast<double>(params.epsilon);
    const double delta = 1e-8 * b0.cut->rect.diameter();

    std::vector<double> ts{0.0};
    for (const EdgeCrossing& c : edge.crossings) ts.push_back(c.t);
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());

    for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
        const double t0 = ts[s], t1 = ts[s + 1];
        if (t1 - t0 < 1e-12) continue;
        const Point pa = a + t0 * (bpt - a);
        const Point pb = a + t1 * (bpt - a);
        const Point mid = 0.5 * (pa + pb);
        const int piece0 = b0.cut->find_piece(mid - delta * n_e);
        const int piece1 = b1.cut->find_piece(mid + delta * n_e);
        const double beta0 =
            beta[static_cast<std::size_t>(b0.cut->pieces[static_cast<std::size_t>(piece0)].region - 1)];
        const double beta1 =
            beta[static_cast<std::size_t>(b1.cut->pieces[static_cast<std::size_t>(piece1)].region - 1)];

        const QuadRule rule = segment_rule(pa, pb, params.edge_order);
        std::vector<double> val(static_cast<std::size_t>(ncols));
        std::vector<double> flx(static_cast<std::size_t>(ncols));
        std::vector<double> jmp(static_cast<std::size_t>(ncols));
        for (std::size_t qp = 0; qp < rule.points.size(); ++qp) {
            const Point p = rule.points[qp];
            const double w = rule.weights[qp];
            auto fill = [&](int col, const LocalBasis& basis, int piece, BasisSelector sel,
                            double side_sign, double beta_side) {
                const EvalResult r = evaluate_on_piece(basis, sel, piece, p);
                val[static_cast<std::size_t>(col)] = r.value;
                flx[static_cast<std::size_t>(col)] = beta_side * dot(r.grad, n_e);
                jmp[static_cast<std::size_t>(col)] = side_sign * r.value;
            };
            for (int i = 0; i < 4; ++i) {
                fill(i, b0, piece0, {BasisSelector::Nodal, i}, 1.0, beta0);
                fill(4 + i, b1, piece1, {BasisSelector::Nodal, i}, -1.0, beta1);
            }
            for (int t = 0; t < blk.k0; ++t)
                fill(8 + t, b0, piece0, {BasisSelector::Flux, t}, 1.0, beta0);
            for (int t = 0; t < blk.k1; ++t)
                fill(8 + blk.k0 + t, b1, piece1, {BasisSelector::Flux, t}, -1.0, beta1);

            for (int i = 0; i < 8; ++i) {
                const double ji = jmp[static_cast<std::size_t>(i)];
                const double fi = flx[static_cast<std::size_t>(i)];
                for (int j = 0; j < ncols; ++j) {
                    blk.K(i, j) += w * (-0.5 * flx[static_cast<std::size_t>(j)] * ji +
                                        eps * 0.5 * fi * jmp[static_cast<std::size_t>(j)] +
                                        (sigma_e / len) * jmp[static_cast<std::size_t>(j)] * ji);
                }
            }
        }
    }
    return blk;
}

std::vector<int> interior_interface_edges(const CartesianMesh& mesh) {
    std::vector<int> ids;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const MeshEdge& edge = mesh.edges[static_cast<std::size_t>(e)];
        if (edge.interface && !edge.boundary) ids.push_back(e);
    }
    return ids;
}

}  // namespace

TripletList assemble_volume(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                            const ProblemSpec& spec, const SchemeParams& params, Exec exec) {
    const int ne = mesh.num_elements();
    std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(ne));
    for_each_index(ne, exec, [&](std::ptrdiff_t e) {
        blocks[static_cast<std::size_t>(e)] =
            volume_block(mesh.cuts[static_cast<std::size_t>(e)], bases[static_cast<std::size_t>(e)],
                         spec.beta, params.volume_order)
                .leftCols(4);
    });
    TripletList trips;
    trips.reserve(static_cast<std::size_t>(16 * ne));
    for (int e = 0; e < ne; ++e) {
        const auto nodes = mesh.element_nodes(e);
        const Eigen::MatrixXd& K = blocks[static_cast<std::size_t>(e)];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                trips.emplace_back(nodes[static_cast<std::size_t>(i)],
                                   nodes[static_cast<std::size_t>(j)], K(i, j));
    }
    return trips;
}

TripletList assemble_edge_terms(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                                const SchemeParams& params, Exec exec) {
    if (params.scheme != Scheme::PPIFEM) return {};
    const std::array<double, 3> beta = bases.empty() ? std::array<double, 3>{1.0, 1.0, 1.0}
                                                     : bases.front().beta;
    const std::vector<int> eids = interior_interface_edges(mesh);
    std::vector<Eigen::MatrixXd> blocks(eids.size());
    for_each_index(static_cast<std::ptrdiff_t>(eids.size()), exec, [&](std::ptrdiff_t i) {
        blocks[static_cast<std::size_t>(i)] =
            edge_block(mesh, bases, eids[static_cast<std::size_t>(i)], params, beta)
                .K.leftCols(8);
    });
    TripletList trips;
    trips.reserve(64 * eids.size());
    for (std::size_t i = 0; i < eids.size(); ++i) {
        const MeshEdge& edge = mesh.edges[static_cast<std::size_t>(eids[i])];
        const auto n0 = mesh.element_nodes(edge.elem0);
        const auto n1 = mesh.element_nodes(edge.elem1);
        int rows[8];
        for (int j = 0; j < 4; ++j) {
            rows[j] = n0[static_cast<std::size_t>(j)];
            rows[4 + j] = n1[static_cast<std::size_t>(j)];
        }
        const Eigen::MatrixXd& K = blocks[i];
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) trips.emplace_back(rows[r], rows[c], K(r, c));
    }
    return trips;
}

Eigen::VectorXd assemble_rhs(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                             const ProblemSpec& spec, const SchemeParams& params,
                             const std::vector<std::vector<double>>& q, Exec exec) {
    const int ne = mesh.num_elements();
    std::vector<Eigen::Vector4d> elem_rhs(static_cast<std::size_t>(ne));

    for_each_index(ne, exec, [&](std::ptrdiff_t e) {
        const ElementCut& cut = mesh.cuts[static_cast<std::size_t>(e)];
        const LocalBasis& basis = bases[static_cast<std::size_t>(e)];
        Eigen::Vector4d r = Eigen::Vector4d::Zero();

        for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
            const CutPiece& piece = cut.pieces[pi];
            const QuadRule rule = polygon_rule(piece.poly, params.volume_order);
            for (std::size_t qp = 0; qp < rule.points.size(); ++qp) {
                const Point p = rule.points[qp];
                const double wf = rule.weights[qp] * spec.f(p, piece.region);
                for (int i = 0; i < 4; ++i)
                    r(i) += wf * basis.nodal[static_cast<std::size_t>(i)][pi].value(p);
            }
        }

        // Interface data terms; traces averaged across the segment sides.
        for (const CutSegment& seg : cut.segments) {
            const auto& bfun = spec.b[static_cast<std::size_t>(seg.interface_id - 1)];
            const QuadRule rule = segment_rule(seg.a, seg.b, params.edge_order);
            for (std::size_t qp = 0; qp < rule.points.size(); ++qp) {
                const Point p = rule.points[qp];
                const double wb = rule.weights[qp] * bfun(p);
                for (int i = 0; i < 4; ++i) {
                    const double vm =
                        basis.nodal[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                                        seg.piece_minus)]
                            .value(p);
                    const double vp =
                        basis.nodal[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                                        seg.piece_plus)]
                            .value(p);
                    r(i) -= wb * 0.5 * (vm + vp);
                }
            }
        }

        // Volume part of a_h(u_h^J, v).
        const auto& qe = q[static_cast<std::size_t>(e)];
        if (!qe.empty()) {
            const Eigen::MatrixXd K =
                volume_block(cut, basis, spec.beta, params.volume_order);
            for (std::size_t k = 0; k < qe.size(); ++k)
                r -= qe[k] * K.col(4 + static_cast<Eigen::Index>(k));
        }
        elem_rhs[static_cast<std::size_t>(e)] = r;
    });

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.num_nodes());
    for (int e = 0; e < ne; ++e) {
        const auto nodes = mesh.element_nodes(e);
        for (int i = 0; i < 4; ++i)
            rhs(nodes[static_cast<std::size_t>(i)]) += elem_rhs[static_cast<std::size_t>(e)](i);
    }

    // Edge part of a_h(u_h^J, v) (PPIFEM only).
    if (params.scheme == Scheme::PPIFEM) {
        const std::vector<int> eids = interior_interface_edges(mesh);
        std::vector<Eigen::VectorXd> edge_rhs(eids.size());
        for_each_index(static_cast<std::ptrdiff_t>(eids.size()), exec, [&](std::ptrdiff_t i) {
            const int eid = eids[static_cast<std::size_t>(i)];
            const MeshEdge& edge = mesh.edges[static_cast<std::size_t>(eid)];
            const EdgeBlock blk = edge_block(mesh, bases, eid, params, spec.beta);
            Eigen::VectorXd r = Eigen::VectorXd::Zero(8);
            const auto& q0 = q[static_cast<std::size_t>(edge.elem0)];
            const auto& q1 = q[static_cast<std::size_t>(edge.elem1)];
            for (int k = 0; k < blk.k0; ++k) r -= q0[static_cast<std::size_t>(k)] * blk.K.col(8 + k);
            for (int k = 0; k < blk.k1; ++k)
                r -= q1[static_cast<std::size_t>(k)] * blk.K.col(8 + blk.k0 + k);
            edge_rhs[static_cast<std::size_t>(i)] = r;
        });
        for (std::size_t i = 0; i < eids.size(); ++i) {
            const MeshEdge& edge = mesh.edges[static_cast<std::size_t>(eids[i])];
            const auto n0 = mesh.element_nodes(edge.elem0);
            const auto n1 = mesh.element_nodes(edge.elem1);
            for (int j = 0; j < 4; ++j) {
                rhs(n0[static_cast<std::size_t>(j)]) += edge_rhs[i](j);
                rhs(n1[static_cast<std::size_t>(j)]) += edge_rhs[i](4 + j);
            }
        }
    }
    return rhs;
}

GlobalSystem assemble_system(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                             const ProblemSpec& spec, const SchemeParams& params,
                             const std::vector<std::vector<double>>& q, Exec exec) {
    TripletList trips = assemble_volume(mesh, bases, spec, params, exec);
    if (params.scheme == Scheme::PPIFEM) {
        TripletList et = assemble_edge_terms(mesh, bases, params, exec);
        trips.insert(trips.end(), et.begin(), et.end());
    }
    GlobalSystem sys;
    sys.A.resize(mesh.num_nodes(), mesh.num_nodes());
    sys.A.setFromTriplets(trips.begin(), trips.end());
    sys.rhs = assemble_rhs(mesh, bases, spec, params, q, exec);
    return sys;
}

SparseSystem apply_dirichlet(const GlobalSystem& system, const CartesianMesh& mesh,
                             const ProblemSpec& spec) {
    SparseSystem red;
    red.dirichlet_values = Eigen::VectorXd::Zero(mesh.num_nodes());
    for (int node = 0; node < mesh.num_nodes(); ++node)
        if (mesh.node_on_boundary(node))
            red.dirichlet_values(node) = spec.g(mesh.nodes[static_cast<std::size_t>(node)]);

    red.rhs = Eigen::VectorXd::Zero(mesh.num_dofs);
    TripletList trips;
    for (int row = 0; row < mesh.num_nodes(); ++row) {
        const int di = mesh.dof_of_node[static_cast<std::size_t>(row)];
        if (di < 0) continue;
        double r = system.rhs(row);
        for (SparseMat::InnerIterator it(system.A, row); it; ++it) {
            const int col = static_cast<int>(it.col());
            const int dj = mesh.dof_of_node[static_cast<std::size_t>(col)];
            if (dj >= 0)
                trips.emplace_back(di, dj, it.value());
            else
                r -= it.value() * red.dirichlet_values(col);
        }
        red.rhs(di) = r;
    }
    red.A.resize(mesh.num_dofs, mesh.num_dofs);
    red.A.setFromTriplets(trips.begin(), trips.end());
    return red;
}

Eigen::VectorXd expand_to_nodes(const CartesianMesh& mesh, const SparseSystem& system,
                                const Eigen::VectorXd& interior) {
    Eigen::VectorXd nodal = system.dirichlet_values;
    for (int dof = 0; dof < mesh.num_dofs; ++dof)
        nodal(mesh.node_of_dof[static_cast<std::size_t>(dof)]) = interior(dof);
    return nodal;
}

}  // namespace ppifem
