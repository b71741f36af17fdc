#include "gmt/firstvar.hpp"

#include <cmath>

namespace gmt {

FirstVariationReport first_variation(const DiscreteVarifold& dv) {
    if (dv.cells().empty()) throw ValidationError("first_variation: empty discrete varifold");
    const CartesianGrid& g = dv.grid();
    const int n = g.dim();
    const double volume = g.cell_volume();
    const double area = std::pow(g.h(), n - 1);

    FirstVariationReport report;
    Vec normal(n, 0.0);
    for (const auto& [flat, cell] : dv.cells()) {
        const double density_k = cell.mass / volume;
        for (int axis = 0; axis < n; ++axis) {
            normal.assign(n, 0.0);
            normal[axis] = 1.0;
            for (int step : {+1, -1}) {
                const std::int64_t other = g.neighbor(flat, axis, step);
                if (other < 0) continue;  // face on the hull
                const Cell* nb = dv.find(other);
                if (nb) {
                    if (step < 0) continue;  // counted from the lower cell
                    const Vec a = cell.plane.projector().apply(normal);
                    const Vec b = nb->plane.projector().apply(normal);
                    const double density_nb = nb->mass / volume;
                    double s = 0.0;
                    for (int i = 0; i < n; ++i) {
                        const double t = density_nb * b[i] - density_k * a[i];
                        s += t * t;
                    }
                    const double density = std::sqrt(s);
                    report.terms.push_back(
                        FaceTerm{FaceKind::internal, axis, flat, other, density, area, density * area});
                } else {
                    const double density = density_k * norm(cell.plane.project(normal));
                    report.terms.push_back(
                        FaceTerm{FaceKind::boundary, axis, flat, other, density, area, density * area});
                }
            }
        }
    }
    for (const FaceTerm& t : report.terms) {
        report.total += t.contribution;
        (t.kind == FaceKind::internal ? report.internal_total : report.boundary_total) += t.contribution;
    }
    return report;
}

std::vector<ExplosionRow> explosion_sweep(const AtomicVarifold& v, const std::vector<double>& h_list) {
    if (h_list.empty()) throw ValidationError("explosion_sweep: empty h list");
    std::vector<ExplosionRow> rows;
    for (double h : h_list) {
        const auto grid = CartesianGrid::covering(v.domain(), h);
        const double total = first_variation(discretize(v, grid)).total;
        rows.push_back(ExplosionRow{h, total, h * total});
    }
    return rows;
}

}  // namespace gmt
