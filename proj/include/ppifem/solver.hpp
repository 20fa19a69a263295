#pragma once

#include "ppifem/assembly.hpp"

namespace ppifem {

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Interior-DOF solve. Symmetric PPIFEM (epsilon = -1) goes through
/// diagonally preconditioned conjugate gradients with breakdown detection;
/// the remaining schemes use BiCGSTAB, or a dense factorization below 2000
/// DOFs. Relative residual 1e-12, at most 20*dofs iterations.
Eigen::VectorXd solve(const SparseSystem& system, const SchemeParams& params,
                      Exec exec = Exec::Parallel, SolveReport* report = nullptr);

/// Deterministic conjugate gradients (fixed-chunk reductions); used directly
/// by tests.
Eigen::VectorXd conjugate_gradient(const SparseMat& A, const Eigen::VectorXd& rhs, double rel_tol,
                                   int max_iter, Exec exec, SolveReport* report = nullptr);

}  // namespace ppifem
