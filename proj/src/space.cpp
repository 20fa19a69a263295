#include "ppifem/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ppifem/errors.hpp"
#include "ppifem/quadrature.hpp"

namespace ppifem {

std::vector<LocalBasis> build_bases(const CartesianMesh& mesh, const std::array<double, 3>& beta,
                                    Exec exec) {
    std::vector<LocalBasis> bases(static_cast<std::size_t>(mesh.num_elements()));
    std::vector<std::string> failures(bases.size());
    for_each_index(mesh.num_elements(), exec, [&](std::ptrdiff_t e) {
        try {
            bases[static_cast<std::size_t>(e)] =
                build_local_basis(mesh.cuts[static_cast<std::size_t>(e)], beta);
        } catch (const std::exception& ex) {
            failures[static_cast<std::size_t>(e)] = ex.what();
        }
    });
    for (std::size_t e = 0; e < failures.size(); ++e) {
        if (!failures[e].empty()) {
            std::ostringstream os;
            os << "build_bases: element " << e << ": " << failures[e];
            throw Error(os.str());
        }
    }
    return bases;
}

std::vector<std::vector<double>> flux_enrichment(const CartesianMesh& mesh,
                                                 const ProblemSpec& spec, int segment_order,
                                                 Exec exec) {
    std::vector<std::vector<double>> q(static_cast<std::size_t>(mesh.num_elements()));
    for_each_index(mesh.num_elements(), exec, [&](std::ptrdiff_t e) {
        const ElementCut& cut = mesh.cuts[static_cast<std::size_t>(e)];
        auto& qe = q[static_cast<std::size_t>(e)];
        qe.resize(cut.segments.size(), 0.0);
        for (std::size_t s = 0; s < cut.segments.size(); ++s) {
            const CutSegment& seg = cut.segments[s];
            const auto& b = spec.b[static_cast<std::size_t>(seg.interface_id - 1)];
            qe[s] = segment_rule(seg.a, seg.b, segment_order).integrate(b);
        }
    });
    return q;
}

int DiscreteField::element_of(Point p) const {
    const CartesianMesh& m = *mesh;
    int ex = static_cast<int>(std::floor((p.x - m.domain.x0) / m.hx));
    int ey = static_cast<int>(std::floor((p.y - m.domain.y0) / m.hy));
    ex = std::clamp(ex, 0, m.n - 1);
    ey = std::clamp(ey, 0, m.n - 1);
    return m.element_id(ex, ey);
}

EvalResult DiscreteField::eval(Point p) const {
    const int e = element_of(p);
    const int piece = (*bases)[static_cast<std::size_t>(e)].cut->find_piece(p);
    return eval_on_piece(e, piece, p);
}

EvalResult DiscreteField::eval_on_piece(int element, int piece, Point p) const {
    const LocalBasis& basis = (*bases)[static_cast<std::size_t>(element)];
    const auto nodes = mesh->element_nodes(element);
    EvalResult out;
    for (int j = 0; j < 4; ++j) {
        const double coef = nodal(nodes[static_cast<std::size_t>(j)]);
        const EvalResult b = evaluate_on_piece(basis, {BasisSelector::Nodal, j}, piece, p);
        out.value += coef * b.value;
        out.grad = out.grad + coef * b.grad;
    }
    const auto& qe = q[static_cast<std::size_t>(element)];
    for (std::size_t k = 0; k < qe.size(); ++k) {
        const EvalResult b =
            evaluate_on_piece(basis, {BasisSelector::Flux, static_cast<int>(k)}, piece, p);
        out.value += qe[k] * b.value;
        out.grad = out.grad + qe[k] * b.grad;
    }
    return out;
}

}  // namespace ppifem
