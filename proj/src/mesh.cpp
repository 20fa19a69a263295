#include "ppifem/mesh.hpp"

#include <sstream>

#include "ppifem/errors.hpp"

namespace ppifem {

Rect CartesianMesh::element_rect(int e) const {
    const int ex = e % n;
    const int ey = e / n;
    return {domain.x0 + ex * hx, domain.y0 + ey * hy, domain.x0 + (ex + 1) * hx,
            domain.y0 + (ey + 1) * hy};
}

std::array<int, 4> CartesianMesh::element_nodes(int e) const {
    const int ex = e % n;
    const int ey = e / n;
    return {node_id(ex, ey), node_id(ex + 1, ey), node_id(ex + 1, ey + 1), node_id(ex, ey + 1)};
}

std::array<int, 4> CartesianMesh::element_edges(int e) const {
    const int ex = e % n;
    const int ey = e / n;
    return {h_edge_id(ex, ey), v_edge_id(ex + 1, ey), h_edge_id(ex, ey + 1), v_edge_id(ex, ey)};
}

bool CartesianMesh::node_on_boundary(int node) const {
    const int i = node % (n + 1);
    const int j = node / (n + 1);
    return i == 0 || i == n || j == 0 || j == n;
}

CartesianMesh build_mesh(const Rect& domain, int n, const SubdomainGeometry& geom, Exec exec) {
    if (n < 2) throw Error("build_mesh: n must be at least 2");
    CartesianMesh mesh;
    mesh.domain = domain;
    mesh.n = n;
    mesh.hx = domain.width() / n;
    mesh.hy = domain.height() / n;

    mesh.nodes.resize(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.nodes[static_cast<std::size_t>(mesh.node_id(i, j))] = {domain.x0 + i * mesh.hx,
                                                                        domain.y0 + j * mesh.hy};

    // Edges: horizontal block (j rows of n edges each, j = 0..n), then the
    // vertical block (i columns of n edges each, i = 0..n).
    mesh.edges.resize(static_cast<std::size_t>(2 * n * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i < n; ++i) {
            MeshEdge& e = mesh.edges[static_cast<std::size_t>(mesh.h_edge_id(i, j))];
            e.n0 = mesh.node_id(i, j);
            e.n1 = mesh.node_id(i + 1, j);
            e.elem0 = (j > 0) ? mesh.element_id(i, j - 1) : -1;
            e.elem1 = (j < n) ? mesh.element_id(i, j) : -1;
            if (e.elem0 < 0) std::swap(e.elem0, e.elem1);
            e.boundary = (j == 0 || j == n);
        }
    }
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j < n; ++j) {
            MeshEdge& e = mesh.edges[static_cast<std::size_t>(mesh.v_edge_id(i, j))];
            e.n0 = mesh.node_id(i, j);
            e.n1 = mesh.node_id(i, j + 1);
            e.elem0 = (i > 0) ? mesh.element_id(i - 1, j) : -1;
            e.elem1 = (i < n) ? mesh.element_id(i, j) : -1;
            if (e.elem0 < 0) std::swap(e.elem0, e.elem1);
            e.boundary = (i == 0 || i == n);
        }
    }

    // Edge crossings in the canonical direction; the same snapping rule as
    // cut_element so the interface flag matches the element cuts.
    for_each_index(mesh.num_edges(), exec, [&](std::ptrdiff_t ei) {
        MeshEdge& e = mesh.edges[static_cast<std::size_t>(ei)];
        const Point a = mesh.nodes[static_cast<std::size_t>(e.n0)];
        const Point b = mesh.nodes[static_cast<std::size_t>(e.n1)];
        std::vector<EdgeCrossing> kept;
        for (const EdgeCrossing& c : edge_region_crossings(geom, a, b))
            if (c.t >= kSnapParam && c.t <= 1.0 - kSnapParam) kept.push_back(c);
        e.crossings = std::move(kept);
        e.interface = !e.crossings.empty();
    });

    mesh.cuts.resize(static_cast<std::size_t>(mesh.num_elements()));
    std::vector<std::string> failures(static_cast<std::size_t>(mesh.num_elements()));
    for_each_index(mesh.num_elements(), exec, [&](std::ptrdiff_t e) {
        try {
            mesh.cuts[static_cast<std::size_t>(e)] =
                cut_element(geom, mesh.element_rect(static_cast<int>(e)));
        } catch (const std::exception& ex) {
            failures[static_cast<std::size_t>(e)] = ex.what();
        }
    });
    for (std::size_t e = 0; e < failures.size(); ++e) {
        if (!failures[e].empty()) {
            std::ostringstream os;
            os << "build_mesh: element " << e << ": " << failures[e];
            throw Error(os.str());
        }
    }

    mesh.dof_of_node.assign(mesh.nodes.size(), -1);
    for (int node = 0; node < mesh.num_nodes(); ++node) {
        if (!mesh.node_on_boundary(node)) {
            mesh.dof_of_node[static_cast<std::size_t>(node)] = mesh.num_dofs++;
            mesh.node_of_dof.push_back(node);
        }
    }
    return mesh;
}

std::vector<int> classification_map(const CartesianMesh& mesh) {
    std::vector<int> codes(static_cast<std::size_t>(mesh.num_elements()));
    for (std::size_t e = 0; e < codes.size(); ++e)
        codes[e] = static_cast<int>(mesh.cuts[e].cls);
    return codes;
}

}  // namespace ppifem
