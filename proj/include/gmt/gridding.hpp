#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gmt/common.hpp"
#include "gmt/grassmann.hpp"
#include "gmt/varifold.hpp"

namespace gmt {

using MultiIndex = std::vector<std::int64_t>;

/// Uniform cartesian grid: cell i covers [origin + i*h, origin + (i+1)*h) per
/// axis. The grid hull is the open domain of every varifold built on it.
class CartesianGrid {
public:
    CartesianGrid(Vec origin, double h, std::vector<std::int64_t> counts);

    /// Smallest grid of side h anchored at box.lo whose hull contains box.
    static CartesianGrid covering(const Box& box, double h);

    int dim() const { return static_cast<int>(origin_.size()); }
    const Vec& origin() const { return origin_; }
    double h() const { return h_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    std::int64_t cell_count() const { return total_; }
    double cell_volume() const;
    Box hull() const;

    /// Half-open cell containing x, or nullopt when x is outside the hull.
    std::optional<std::int64_t> locate(std::span<const double> x) const;

    std::int64_t flatten(const MultiIndex& idx) const;
    MultiIndex unflatten(std::int64_t flat) const;
    /// Flat index of the neighbor one step along `axis`, or -1 past the hull.
    std::int64_t neighbor(std::int64_t flat, int axis, int step) const;
    Vec cell_lower_corner(std::int64_t flat) const;

private:
    Vec origin_;
    double h_;
    std::vector<std::int64_t> counts_;
    std::vector<std::int64_t> strides_;
    std::int64_t total_ = 0;
};

struct Cell {
    double mass = 0.0;
    Plane plane;
    bool degenerate = false;
};

/// sum_K (m_K/|K|) L^n|_K (x) delta_{P_K}. Only cells with m_K > 0 are stored,
/// keyed by row-major flat index (so iteration order is fixed).
class DiscreteVarifold {
public:
    DiscreteVarifold(CartesianGrid grid, int d, std::map<std::int64_t, Cell> cells);

    const CartesianGrid& grid() const { return grid_; }
    int dim() const { return d_; }
    int ambient_dim() const { return grid_.dim(); }
    const std::map<std::int64_t, Cell>& cells() const { return cells_; }
    const Cell* find(std::int64_t flat) const;
    double mass_of(std::int64_t flat) const;
    double total_mass() const;

    /// Copy with every cell mass multiplied by c > 0.
    DiscreteVarifold scaled(double c) const;

private:
    CartesianGrid grid_;
    int d_;
    std::map<std::int64_t, Cell> cells_;
};

/// m_K = total atom mass in K, P_K = mean_plane of the in-cell atoms.
/// Throws ValidationError naming the first atom outside the grid.
DiscreteVarifold discretize(const AtomicVarifold& v, const CartesianGrid& grid);

/// Tensor midpoint rule with q nodes per axis in every nonzero cell, each node
/// carrying m_K / q^n and the plane P_K. The domain is the grid hull.
AtomicVarifold atomize(const DiscreteVarifold& dv, int q);

inline constexpr int kDefaultQuadrature = 3;

}  // namespace gmt
