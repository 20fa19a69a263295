#pragma once

#include <array>
#include <vector>

#include "ppifem/geometry.hpp"
#include "ppifem/parallel.hpp"

namespace ppifem {

/// A mesh edge in its canonical direction (left->right or bottom->top).
/// Interface crossings in the open interior are stored as parameters along
/// that direction; an edge with at least one of them is an interface edge.
struct MeshEdge {
    int n0 = -1, n1 = -1;        // node ids, canonical order
    int elem0 = -1, elem1 = -1;  // adjacent elements, elem1 = -1 on the boundary
    bool boundary = false;
    bool interface = false;
    std::vector<EdgeCrossing> crossings;
};

/// Uniform n x n Cartesian mesh of an axis-aligned rectangle with per-element
/// cut geometry and a DOF map over the interior nodes.
class CartesianMesh {
  public:
    Rect domain;
    int n = 0;
    double hx = 0.0, hy = 0.0;

    std::vector<Point> nodes;        // (n+1)^2, row-major, x fastest
    std::vector<MeshEdge> edges;     // horizontal block first, then vertical
    std::vector<ElementCut> cuts;    // n^2, row-major
    std::vector<int> dof_of_node;    // -1 for boundary nodes
    std::vector<int> node_of_dof;
    int num_dofs = 0;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return n * n; }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int node_id(int i, int j) const { return j * (n + 1) + i; }
    int element_id(int ex, int ey) const { return ey * n + ex; }

    Rect element_rect(int e) const;

    /// Node ids A1..A4, counter-clockwise from the lower-left corner.
    std::array<int, 4> element_nodes(int e) const;

    /// Edge ids in walk order bottom, right, top, left.
    std::array<int, 4> element_edges(int e) const;

    /// Horizontal edge below node row j at column i / vertical edge left of
    /// node column i at row j.
    int h_edge_id(int i, int j) const { return j * n + i; }
    int v_edge_id(int i, int j) const { return n * (n + 1) + i * n + j; }

    bool node_on_boundary(int node) const;
};

CartesianMesh build_mesh(const Rect& domain, int n, const SubdomainGeometry& geom,
                         Exec exec = Exec::Parallel);

/// Per-element class codes {0,1,2,3} in row-major order.
std::vector<int> classification_map(const CartesianMesh& mesh);

}  // namespace ppifem
