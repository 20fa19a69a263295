#include "ppifem/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <cmath>

#include "ppifem/errors.hpp"

namespace ppifem {

namespace {

void spmv(const SparseMat& A, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec) {
    for_each_index(A.rows(), exec, [&](std::ptrdiff_t row) {
        double s = 0.0;
        for (SparseMat::InnerIterator it(A, static_cast<Eigen::Index>(row)); it; ++it)
            s += it.value() * x(it.col());
        y(static_cast<Eigen::Index>(row)) = s;
    });
}

double ddot(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Exec exec) {
    return deterministic_sum(a.size(), exec, [&](std::ptrdiff_t i) {
        return a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(i));
    });
}

}  // namespace

Eigen::VectorXd conjugate_gradient(const SparseMat& A, const Eigen::VectorXd& rhs, double rel_tol,
                                   int max_iter, Exec exec, SolveReport* report) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const double rhs_norm = std::sqrt(ddot(rhs, rhs, exec));
    if (rhs_norm == 0.0) {
        if (report) *report = {0, 0.0};
        return x;
    }

    Eigen::VectorXd inv_diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = A.coeff(i, i);
        if (!(d > 0.0)) throw SolverBreakdown("cg: non-positive diagonal entry");
        inv_diag(i) = 1.0 / d;
    }

    Eigen::VectorXd r = rhs;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd Ap(n);
    double rz = ddot(r, z, exec);
    double res = rhs_norm;

    for (int it = 0; it < max_iter; ++it) {
        spmv(A, p, Ap, exec);
        const double pAp = ddot(p, Ap, exec);
        if (!(pAp > 0.0))
            throw SolverBreakdown(
                "cg: non-positive curvature (matrix not positive definite; raise sigma0)");
        const double alpha = rz / pAp;
        for_each_index(n, exec, [&](std::ptrdiff_t i) {
            const Eigen::Index k = static_cast<Eigen::Index>(i);
            x(k) += alpha * p(k);
            r(k) -= alpha * Ap(k);
        });
        res = std::sqrt(ddot(r, r, exec));
        if (report) *report = {it + 1, res / rhs_norm};
        if (res <= rel_tol * rhs_norm) return x;
        for_each_index(n, exec, [&](std::ptrdiff_t i) {
            const Eigen::Index k = static_cast<Eigen::Index>(i);
            z(k) = inv_diag(k) * r(k);
        });
        const double rz_next = ddot(r, z, exec);
        const double beta = rz_next / rz;
        rz = rz_next;
        for_each_index(n, exec, [&](std::ptrdiff_t i) {
            const Eigen::Index k = static_cast<Eigen::Index>(i);
            p(k) = z(k) + beta * p(k);
        });
    }
    throw NoConvergence("cg: iteration limit reached");
}

Eigen::VectorXd solve(const SparseSystem& system, const SchemeParams& params, Exec exec,
                      SolveReport* report) {
    const Eigen::Index n = system.A.rows();
    if (n == 0) return Eigen::VectorXd();
    const int max_iter = 20 * static_cast<int>(n);
    const double tol = 1e-12;

    if (params.scheme == Scheme::PPIFEM && params.epsilon == -1)
        return conjugate_gradient(system.A, system.rhs, tol, max_iter, exec, report);

    if (n < 2000) {
        const Eigen::MatrixXd dense(system.A);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
        const Eigen::VectorXd x = lu.solve(system.rhs);
        if (report) {
            const double rhs_norm = system.rhs.norm();
            *report = {1, rhs_norm > 0.0 ? (system.A * x - system.rhs).norm() / rhs_norm : 0.0};
        }
        return x;
    }

    Eigen::BiCGSTAB<SparseMat> solver;
    solver.setTolerance(tol);
    solver.setMaxIterations(max_iter);
    solver.compute(system.A);
    const Eigen::VectorXd x = solver.solve(system.rhs);
    if (solver.info() == Eigen::NumericalIssue)
        throw SolverBreakdown("bicgstab: numerical breakdown");
    if (solver.info() != Eigen::Success && solver.error() > 1e-9)
        throw NoConvergence("bicgstab: iteration limit reached");
    if (report) *report = {static_cast<int>(solver.iterations()), solver.error()};
    return x;
}

}  // namespace ppifem
