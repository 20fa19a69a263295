#pragma once

#include <memory>
#include <optional>
#include <string>

#include "ppifem/assembly.hpp"
#include "ppifem/solver.hpp"

namespace ppifem {

/// Per-mesh errors with successive log2 convergence rates (absent on the
/// first mesh of a study).
struct ErrorReport {
    int n = 0;
    double linf = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
    std::optional<double> rate_linf, rate_l2, rate_h1;
};

enum class StudyKind { Interpolate, Solve };

/// Lagrange interpolation with flux enrichment: exact nodal values plus the
/// q_T^k jump integrals on interface elements.
DiscreteField interpolate(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                          const ProblemSpec& spec, int segment_order = 5,
                          Exec exec = Exec::Parallel);

/// Nodal max error, L2 and H1-seminorm errors by per-piece quadrature with
/// the exact branch selected by the piece subdomain label.
ErrorReport compute_errors(const DiscreteField& field, const ProblemSpec& spec, int order = 5,
                           Exec exec = Exec::Parallel);

/// One full discretization at subdivision n; heap storage keeps the field's
/// internal pointers valid across moves.
struct Discretization {
    std::unique_ptr<CartesianMesh> mesh;
    std::unique_ptr<std::vector<LocalBasis>> bases;
    DiscreteField field;
    SolveReport solver;
};
Discretization run_single(const ProblemSpec& spec, const SchemeParams& params, int n,
                          StudyKind kind, Exec exec = Exec::Parallel);

/// Fills in rate_* = log2(e_prev / e_curr) for consecutive entries.
void add_rates(std::vector<ErrorReport>& reports);

std::vector<ErrorReport> convergence_study(const ProblemSpec& spec, const SchemeParams& params,
                                           const std::vector<int>& subdivisions, StudyKind kind,
                                           Exec exec = Exec::Parallel);

/// CSV with header n,linf,rate_linf,l2,rate_l2,h1,rate_h1; rates blank on
/// the first row.
std::string errors_csv(const std::vector<ErrorReport>& reports);

/// Row-major class codes, one mesh row per line, comma-separated.
std::string classification_csv(const CartesianMesh& mesh);

enum class SurfaceField { Solution, Error };

/// (x, y, value) samples on a uniform (4n+1) x (4n+1) grid.
std::string surface_csv(const DiscreteField& field, const ProblemSpec& spec, SurfaceField kind);

struct SurfaceStats {
    double global_max = 0.0;    // max |u_h - u| over the sample grid
    double band_max = 0.0;      // over samples inside interface elements
    double nonband_max = 0.0;   // over the remaining samples
};
SurfaceStats surface_error_stats(const DiscreteField& field, const ProblemSpec& spec);

}  // namespace ppifem
