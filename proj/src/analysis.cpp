#include "ppifem/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ppifem/errors.hpp"
#include "ppifem/quadrature.hpp"

namespace ppifem {

DiscreteField interpolate(const CartesianMesh& mesh, const std::vector<LocalBasis>& bases,
                          const ProblemSpec& spec, int segment_order, Exec exec) {
    if (!spec.exact) throw MissingExactSolution("interpolate: problem has no exact solution");
    DiscreteField field;
    field.mesh = &mesh;
    field.bases = &bases;
    field.nodal.resize(mesh.num_nodes());
    const ExactSolution& ex = *spec.exact;
    for_each_index(mesh.num_nodes(), exec, [&](std::ptrdiff_t i) {
        const Point p = mesh.nodes[static_cast<std::size_t>(i)];
        field.nodal(static_cast<Eigen::Index>(i)) = ex.value(spec.geom.classify_tolerant(p), p);
    });
    field.q = flux_enrichment(mesh, spec, segment_order, exec);
    return field;
}

ErrorReport compute_errors(const DiscreteField& field, const ProblemSpec& spec, int order,
                           Exec exec) {
    if (!spec.exact) throw MissingExactSolution("compute_errors: problem has no exact solution");
    const CartesianMesh& mesh = *field.mesh;
    const ExactSolution& ex = *spec.exact;

    ErrorReport report;
    report.n = mesh.n;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const Point p = mesh.nodes[static_cast<std::size_t>(i)];
        const double diff =
            std::abs(field.nodal(i) - ex.value(spec.geom.classify_tolerant(p), p));
        report.linf = std::max(report.linf, diff);
    }

    const int ne = mesh.num_elements();
    std::vector<double> l2_part(static_cast<std::size_t>(ne), 0.0);
    std::vector<double> h1_part(static_cast<std::size_t>(ne), 0.0);
    for_each_index(ne, exec, [&](std::ptrdiff_t e) {
        const ElementCut& cut = mesh.cuts[static_cast<std::size_t>(e)];
        double l2 = 0.0, h1 = 0.0;
        for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
            const CutPiece& piece = cut.pieces[pi];
            const QuadRule rule = polygon_rule(piece.poly, order);
            for (std::size_t qp = 0; qp < rule.points.size(); ++qp) {
                const Point p = rule.points[qp];
                const double w = rule.weights[qp];
                const EvalResult uh =
                    field.eval_on_piece(static_cast<int>(e), static_cast<int>(pi), p);
                const double dv = uh.value - ex.value(piece.region, p);
                const Point dg = uh.grad - ex.gradient(piece.region, p);
                l2 += w * dv * dv;
                h1 += w * dot(dg, dg);
            }
        }
        l2_part[static_cast<std::size_t>(e)] = l2;
        h1_part[static_cast<std::size_t>(e)] = h1;
    });
    double l2 = 0.0, h1 = 0.0;
    for (int e = 0; e < ne; ++e) {
        l2 += l2_part[static_cast<std::size_t>(e)];
        h1 += h1_part[static_cast<std::size_t>(e)];
    }
    report.l2 = std::sqrt(l2);
    report.h1 = std::sqrt(h1);
    return report;
}

Discretization run_single(const ProblemSpec& spec, const SchemeParams& params, int n,
                          StudyKind kind, Exec exec) {
    Discretization out;
    out.mesh = std::make_unique<CartesianMesh>(build_mesh(spec.domain, n, spec.geom, exec));
    out.bases =
        std::make_unique<std::vector<LocalBasis>>(build_bases(*out.mesh, spec.beta, exec));
    if (kind == StudyKind::Interpolate) {
        out.field = interpolate(*out.mesh, *out.bases, spec, params.edge_order, exec);
        return out;
    }
    auto q = flux_enrichment(*out.mesh, spec, params.edge_order, exec);
    const GlobalSystem global = assemble_system(*out.mesh, *out.bases, spec, params, q, exec);
    const SparseSystem reduced = apply_dirichlet(global, *out.mesh, spec);
    const Eigen::VectorXd interior = solve(reduced, params, exec, &out.solver);
    out.field.mesh = out.mesh.get();
    out.field.bases = out.bases.get();
    out.field.nodal = expand_to_nodes(*out.mesh, reduced, interior);
    out.field.q = std::move(q);
    return out;
}

void add_rates(std::vector<ErrorReport>& reports) {
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const ErrorReport& prev = reports[i - 1];
        ErrorReport& cur = reports[i];
        auto rate = [](double ep, double ec) -> std::optional<double> {
            if (ep > 0.0 && ec > 0.0) return std::log2(ep / ec);
            return std::nullopt;
        };
        cur.rate_linf = rate(prev.linf, cur.linf);
        cur.rate_l2 = rate(prev.l2, cur.l2);
        cur.rate_h1 = rate(prev.h1, cur.h1);
    }
}

std::vector<ErrorReport> convergence_study(const ProblemSpec& spec, const SchemeParams& params,
                                           const std::vector<int>& subdivisions, StudyKind kind,
                                           Exec exec) {
    std::vector<ErrorReport> reports;
    for (int n : subdivisions) {
        const Discretization d = run_single(spec, params, n, kind, exec);
        reports.push_back(compute_errors(d.field, spec, params.edge_order, exec));
    }
    add_rates(reports);
    return reports;
}

namespace {

std::string format_rate(const std::optional<double>& r) {
    if (!r) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *r);
    return buf;
}

std::string format_err(double e) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", e);
    return buf;
}

}  // namespace

std::string errors_csv(const std::vector<ErrorReport>& reports) {
    std::ostringstream os;
    os << "n,linf,rate_linf,l2,rate_l2,h1,rate_h1\n";
    for (const ErrorReport& r : reports) {
        os << r.n << ',' << format_err(r.linf) << ',' << format_rate(r.rate_linf) << ','
           << format_err(r.l2) << ',' << format_rate(r.rate_l2) << ',' << format_err(r.h1) << ','
           << format_rate(r.rate_h1) << '\n';
    }
    return os.str();
}

std::string classification_csv(const CartesianMesh& mesh) {
    const std::vector<int> codes = classification_map(mesh);
    std::ostringstream os;
    for (int row = 0; row < mesh.n; ++row) {
        for (int col = 0; col < mesh.n; ++col) {
            if (col) os << ',';
            os << codes[static_cast<std::size_t>(row * mesh.n + col)];
        }
        os << '\n';
    }
    return os.str();
}

std::string surface_csv(const DiscreteField& field, const ProblemSpec& spec, SurfaceField kind) {
    if (kind == SurfaceField::Error && !spec.exact)
        throw MissingExactSolution("surface_csv: error field needs an exact solution");
    const CartesianMesh& mesh = *field.mesh;
    const int m = 4 * mesh.n;
    std::ostringstream os;
    os << "x,y,value\n";
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i <= m; ++i) {
            const Point p{mesh.domain.x0 + mesh.domain.width() * i / m,
                          mesh.domain.y0 + mesh.domain.height() * j / m};
            double v = field.eval(p).value;
            if (kind == SurfaceField::Error)
                v -= spec.exact->value(spec.geom.classify_tolerant(p), p);
            os << format_err(p.x) << ',' << format_err(p.y) << ',' << format_err(v) << '\n';
        }
    }
    return os.str();
}

SurfaceStats surface_error_stats(const DiscreteField& field, const ProblemSpec& spec) {
    if (!spec.exact) throw MissingExactSolution("surface_error_stats: no exact solution");
    const CartesianMesh& mesh = *field.mesh;
    const int m = 4 * mesh.n;
    SurfaceStats stats;
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i <= m; ++i) {
            const Point p{mesh.domain.x0 + mesh.domain.width() * i / m,
                          mesh.domain.y0 + mesh.domain.height() * j / m};
            const double err =
                std::abs(field.eval(p).value -
                         spec.exact->value(spec.geom.classify_tolerant(p), p));
            stats.global_max = std::max(stats.global_max, err);
            const int e = field.element_of(p);
            if (mesh.cuts[static_cast<std::size_t>(e)].cls != CutClass::Regular)
                stats.band_max = std::max(stats.band_max, err);
            else
                stats.nonband_max = std::max(stats.nonband_max, err);
        }
    }
    return stats;
}

}  // namespace ppifem
