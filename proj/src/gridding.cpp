#include "gmt/gridding.hpp"

#include <cmath>
#include <string>

namespace gmt {

CartesianGrid::CartesianGrid(Vec origin, double h, std::vector<std::int64_t> counts)
    : origin_(std::move(origin)), h_(h), counts_(std::move(counts)) {
    if (origin_.size() < 2) throw ValidationError("grid: dimension must be >= 2");
    if (counts_.size() != origin_.size()) throw ValidationError("grid: counts/origin dimension mismatch");
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw ValidationError("grid: cell side h must be positive");
    strides_.assign(counts_.size(), 1);
    total_ = 1;
    for (int a = dim() - 1; a >= 0; --a) {
        if (counts_[a] < 1) throw ValidationError("grid: counts must be >= 1 on every axis");
        strides_[a] = total_;
        total_ *= counts_[a];
    }
}

CartesianGrid CartesianGrid::covering(const Box& box, double h) {
    if (!(h > 0.0)) throw ValidationError("grid: cell side h must be positive");
    std::vector<std::int64_t> counts;
    for (int i = 0; i < box.dim(); ++i) {
        const double cells = (box.hi[i] - box.lo[i]) / h;
        // Snap near-integer ratios so e.g. a unit box with h = 1/2 gets 2 cells.
        auto c = static_cast<std::int64_t>(std::ceil(cells - 1e-9));
        counts.push_back(std::max<std::int64_t>(1, c));
    }
    return CartesianGrid(box.lo, h, std::move(counts));
}

double CartesianGrid::cell_volume() const { return std::pow(h_, dim()); }

Box CartesianGrid::hull() const {
    Vec hi(origin_.size());
    for (int a = 0; a < dim(); ++a) hi[a] = origin_[a] + static_cast<double>(counts_[a]) * h_;
    return Box{origin_, std::move(hi)};
}

std::optional<std::int64_t> CartesianGrid::locate(std::span<const double> x) const {
    std::int64_t flat = 0;
    for (int a = 0; a < dim(); ++a) {
        const double t = std::floor((x[a] - origin_[a]) / h_);
        if (!(t >= 0.0) || t >= static_cast<double>(counts_[a])) return std::nullopt;
        flat += static_cast<std::int64_t>(t) * strides_[a];
    }
    return flat;
}

std::int64_t CartesianGrid::flatten(const MultiIndex& idx) const {
    std::int64_t flat = 0;
    for (int a = 0; a < dim(); ++a) {
        if (idx[a] < 0 || idx[a] >= counts_[a]) throw ValidationError("grid: cell index out of range");
        flat += idx[a] * strides_[a];
    }
    return flat;
}

MultiIndex CartesianGrid::unflatten(std::int64_t flat) const {
    MultiIndex idx(dim());
    for (int a = 0; a < dim(); ++a) {
        idx[a] = flat / strides_[a];
        flat %= strides_[a];
    }
    return idx;
}

std::int64_t CartesianGrid::neighbor(std::int64_t flat, int axis, int step) const {
    const std::int64_t i = (flat / strides_[axis]) % counts_[axis] + step;
    if (i < 0 || i >= counts_[axis]) return -1;
    return flat + step * strides_[axis];
}

Vec CartesianGrid::cell_lower_corner(std::int64_t flat) const {
    const MultiIndex idx = unflatten(flat);
    Vec lo(dim());
    for (int a = 0; a < dim(); ++a) lo[a] = origin_[a] + static_cast<double>(idx[a]) * h_;
    return lo;
}

DiscreteVarifold::DiscreteVarifold(CartesianGrid grid, int d, std::map<std::int64_t, Cell> cells)
    : grid_(std::move(grid)), d_(d), cells_(std::move(cells)) {
    if (d_ < 1 || d_ >= grid_.dim()) throw ValidationError("discrete varifold: need 1 <= d < n");
    for (const auto& [flat, cell] : cells_) {
        if (flat < 0 || flat >= grid_.cell_count()) {
            throw ValidationError("discrete varifold: cell " + std::to_string(flat) + " outside grid");
        }
        if (!(cell.mass > 0.0) || !std::isfinite(cell.mass)) {
            throw ValidationError("discrete varifold: stored cells must have positive mass");
        }
        if (cell.plane.dim() != d_ || cell.plane.ambient_dim() != grid_.dim()) {
            throw ValidationError("discrete varifold: cell plane has wrong (d,n)");
        }
    }
}

const Cell* DiscreteVarifold::find(std::int64_t flat) const {
    auto it = cells_.find(flat);
    return it == cells_.end() ? nullptr : &it->second;
}

double DiscreteVarifold::mass_of(std::int64_t flat) const {
    const Cell* c = find(flat);
    return c ? c->mass : 0.0;
}

double DiscreteVarifold::total_mass() const {
    double m = 0.0;
    for (const auto& [flat, cell] : cells_) m += cell.mass;
    return m;
}

DiscreteVarifold DiscreteVarifold::scaled(double c) const {
    if (!(c > 0.0)) throw ValidationError("scaled: factor must be positive");
    auto cells = cells_;
    for (auto& [flat, cell] : cells) cell.mass *= c;
    return DiscreteVarifold(grid_, d_, std::move(cells));
}

DiscreteVarifold discretize(const AtomicVarifold& v, const CartesianGrid& grid) {
    if (grid.dim() != v.ambient_dim()) throw ValidationError("discretize: grid dimension mismatch");
    struct Acc {
        double mass = 0.0;
        SymMatrix weighted;
    };
    std::map<std::int64_t, Acc> acc;
    const int n = v.ambient_dim();
    for (std::size_t j = 0; j < v.size(); ++j) {
        const auto flat = grid.locate(v.position(j));
        if (!flat) {
            throw ValidationError("discretize: atom " + std::to_string(j) + " lies outside the grid");
        }
        Acc& a = acc[*flat];
        if (a.weighted.size() == 0) a.weighted = SymMatrix(n);
        a.mass += v.mass(j);
        a.weighted.add_scaled(v.atom(j).plane.projector(), v.mass(j));
    }
    std::map<std::int64_t, Cell> cells;
    for (auto& [flat, a] : acc) {
        SymMatrix mean(n);
        mean.add_scaled(a.weighted, 1.0 / a.mass);
        PrincipalSubspace ps = principal_subspace(mean, v.dim());
        cells.emplace(flat, Cell{a.mass, std::move(ps.plane), ps.degenerate});
    }
    return DiscreteVarifold(grid, v.dim(), std::move(cells));
}

AtomicVarifold atomize(const DiscreteVarifold& dv, int q) {
    if (q < 1) throw ValidationError("atomize: q must be >= 1");
    const CartesianGrid& g = dv.grid();
    const int n = g.dim();
    std::int64_t nodes = 1;
    for (int a = 0; a < n; ++a) nodes *= q;
    std::vector<Atom> atoms;
    atoms.reserve(dv.cells().size() * nodes);
    for (const auto& [flat, cell] : dv.cells()) {
        const Vec lo = g.cell_lower_corner(flat);
        const double m = cell.mass / static_cast<double>(nodes);
        for (std::int64_t k = 0; k < nodes; ++k) {
            Vec x(n);
            std::int64_t rest = k;
            for (int a = n - 1; a >= 0; --a) {
                const auto i = rest % q;
                rest /= q;
                x[a] = lo[a] + (static_cast<double>(i) + 0.5) / q * g.h();
            }
            atoms.push_back(Atom{std::move(x), cell.plane, m});
        }
    }
    if (atoms.empty()) throw ValidationError("atomize: discrete varifold has no cells");
    return AtomicVarifold(n, dv.dim(), std::move(atoms), g.hull());
}

}  // namespace gmt
