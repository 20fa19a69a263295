#pragma once

#include <Eigen/SparseCore>

#include "ppifem/space.hpp"

namespace ppifem {

enum class Scheme { PPIFEM, Galerkin };

struct SchemeParams {
    Scheme scheme = Scheme::PPIFEM;
    int epsilon = -1;       // -1 symmetric, 0 incomplete, +1 nonsymmetric
    double sigma0 = 100.0;  // penalty scale: sigma_e = sigma0 * max_i beta_i
    int volume_order = 4;   // polygon quadrature (bilinear gradients are biquadratic)
    int edge_order = 5;     // segment quadrature for edge and interface data terms
};

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// System over all mesh nodes, before Dirichlet elimination.
struct GlobalSystem {
    SparseMat A;
    Eigen::VectorXd rhs;
};

/// Reduced system over interior-node DOFs.
struct SparseSystem {
    SparseMat A;
    Eigen::VectorXd rhs;
    Eigen::VectorXd dirichlet_values;  // per mesh node, zero at interior nodes
};

using TripletList = std::vector<Eigen::Triplet<double>>;

/// Piecewise stiffness contributions: beta-weighted gradient products over
/// every cut piece of every element.
TripletList assemble_volume(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                            const ProblemSpec& spec, const SchemeParams& params,
                            Exec exec = Exec::Parallel);

/// Interior-penalty terms on interior interface edges: consistency,
/// epsilon-symmetrization and penalty, with averages and jumps oriented from
/// the lower- to the higher-indexed adjacent element.
TripletList assemble_edge_terms(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                                const SchemeParams& params, Exec exec = Exec::Parallel);

/// Right-hand side: (f, v) minus the interface data terms (b_i, v) minus the
/// full bilinear form applied to the flux enrichment u_h^J.
Eigen::VectorXd assemble_rhs(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                             const ProblemSpec& spec, const SchemeParams& params,
                             const std::vector<std::vector<double>>& q, Exec exec = Exec::Parallel);

GlobalSystem assemble_system(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                             const ProblemSpec& spec, const SchemeParams& params,
                             const std::vector<std::vector<double>>& q, Exec exec = Exec::Parallel);

/// Strong boundary enforcement: boundary nodal values from g, their
/// contributions moved to the right-hand side, system restricted to
/// interior DOFs.
SparseSystem apply_dirichlet(const GlobalSystem& system, const CartesianMesh& mesh,
                             const ProblemSpec& spec);

/// Interior solution expanded to all nodes with the Dirichlet values filled in.
Eigen::VectorXd expand_to_nodes(const CartesianMesh& mesh, const SparseSystem& system,
                                const Eigen::VectorXd& interior);

}  // namespace ppifem
