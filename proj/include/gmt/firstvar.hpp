#pragma once

#include <cstdint>
#include <vector>

#include "gmt/gridding.hpp"
#include "gmt/varifold.hpp"

namespace gmt {

enum class FaceKind { internal, boundary };

/// One mesh face sigma between `cell` and `neighbor` (neighbor = cell + e_axis
/// or cell - e_axis). For boundary faces `cell` is the positive-mass side.
struct FaceTerm {
    FaceKind kind;
    int axis;
    std::int64_t cell;
    std::int64_t neighbor;
    double density;       // norm of the bracketed vector
    double area;          // h^{n-1}
    double contribution;  // density * area
};

struct FirstVariationReport {
    std::vector<FaceTerm> terms;
    double total = 0.0;
    double internal_total = 0.0;
    double boundary_total = 0.0;
};

/// |delta V_K|(Omega) by the exact face sum for a piecewise-constant discrete
/// varifold. Internal faces (both sides positive) contribute
///   |(m+/|K|) Pi+ n - (m-/|K|) Pi- n| h^{n-1},
/// boundary faces (one side empty) contribute (m_K/|K|) |Pi_K n| h^{n-1}.
/// Faces on the grid hull are outside the open domain and are not charged.
/// Terms are ordered by positive cell (flat index), then axis, then the upper
/// face before the lower one.
FirstVariationReport first_variation(const DiscreteVarifold& dv);

struct ExplosionRow {
    double h;
    double total;
    double h_times_total;
};

/// For each h: discretize v on the grid of side h covering v.domain(), then
/// evaluate the first-variation total.
std::vector<ExplosionRow> explosion_sweep(const AtomicVarifold& v, const std::vector<double>& h_list);

}  // namespace gmt
