#pragma once

#include <Eigen/Core>

#include "ppifem/basis.hpp"
#include "ppifem/mesh.hpp"
#include "ppifem/parallel.hpp"
#include "ppifem/problem.hpp"

namespace ppifem {

/// Local bases for every element of the mesh (flux parts included on
/// interface elements).
std::vector<LocalBasis> build_bases(const CartesianMesh& mesh, const std::array<double, 3>& beta,
                                    Exec exec = Exec::Parallel);

/// Enrichment coefficients q_T^k = integral of b_k over the k-th interface
/// segment of each element, indexed [element][segment].
std::vector<std::vector<double>> flux_enrichment(const CartesianMesh& mesh,
                                                 const ProblemSpec& spec, int segment_order,
                                                 Exec exec = Exec::Parallel);

/// A member of the enriched IFE space: nodal coefficients at every mesh node
/// plus the (known) enrichment coefficients.
struct DiscreteField {
    const CartesianMesh* mesh = nullptr;
    const std::vector<LocalBasis>* bases = nullptr;
    Eigen::VectorXd nodal;
    std::vector<std::vector<double>> q;

    /// Element containing p (clamped at element boundaries).
    int element_of(Point p) const;

    EvalResult eval(Point p) const;
    EvalResult eval_on_piece(int element, int piece, Point p) const;
};

}  // namespace ppifem
