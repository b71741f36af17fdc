#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gmt/common.hpp"
#include "gmt/grassmann.hpp"

namespace gmt {

/// Axis-aligned box [lo, hi].
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(std::span<const double> x) const;         // closed
    bool contains_strict(std::span<const double> x) const;  // open
    /// Euclidean distance from x (inside the box) to the complement of the
    /// open box; nonpositive when x is outside.
    double distance_to_complement(std::span<const double> x) const;
    double diameter() const;
};

/// Distance between the closed box `inner` and the complement of `outer`
/// (nonpositive when inner is not contained in the interior of outer).
double box_gap(const Box& inner, const Box& outer);

struct Atom {
    Vec x;
    Plane plane;
    double mass = 0.0;
};

/// Finite weighted atom list sum_j m_j delta_{x_j} (x) delta_{P_j}, the
/// in-memory representation of every varifold the library handles.
class AtomicVarifold {
public:
    /// Validates dimensions, positive finite masses and containment in the
    /// domain. Without an explicit domain, the bounding box of the atoms is
    /// padded on every side by 10% of its largest side.
    AtomicVarifold(int n, int d, std::vector<Atom> atoms, std::optional<Box> domain = std::nullopt);

    int ambient_dim() const { return n_; }
    int dim() const { return d_; }
    std::size_t size() const { return atoms_.size(); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const Atom& atom(std::size_t j) const { return atoms_[j]; }
    const Box& domain() const { return domain_; }

    /// Atom positions packed row-major (size() x n) for tight loops.
    std::span<const double> position(std::size_t j) const {
        return std::span<const double>(positions_).subspan(j * n_, n_);
    }
    double mass(std::size_t j) const { return atoms_[j].mass; }

    /// sum_j m_j in atom order, cached at construction.
    double total_mass() const { return total_mass_; }

private:
    int n_;
    int d_;
    std::vector<Atom> atoms_;
    std::vector<double> positions_;
    Box domain_;
    double total_mass_ = 0.0;
};

inline double total_mass(const AtomicVarifold& v) { return v.total_mass(); }

/// ||V||(B_r(center)) with the open ball |x_j - center| < r; summed in atom
/// order.
double mass_in_ball(const AtomicVarifold& v, std::span<const double> center, double r);

/// Atoms strictly inside `box`; the result's domain is `box`.
AtomicVarifold restrict(const AtomicVarifold& v, const Box& box);

/// Canonical 1-varifold of the segment [a,b]: `count` atoms at the midpoints
/// of equal pieces, each of mass |b-a|/count.
AtomicVarifold sample_line(const Vec& a, const Vec& b, int count,
                           std::optional<Box> domain = std::nullopt);

/// Circle of the given radius in R^2, atoms at angles 2 pi k / count carrying
/// the tangent line and mass 2 pi R / count.
AtomicVarifold sample_circle(const Vec& center, double radius, int count,
                             std::optional<Box> domain = std::nullopt);

using ScalarField = std::function<double(std::span<const double>)>;

/// Graph of f over [0,1]^d in R^{d+1}, d in {1,2}. One atom per grid cell at
/// (u, f(u)); area element and tangent plane come from central differences
/// with spacing equal to the cell width (O(h^2) bias).
AtomicVarifold sample_graph(const ScalarField& f, int d, int grid,
                            std::optional<Box> domain = std::nullopt);

/// Uniform planar cloud on [0,1]^2: side_count^2 atoms at cell midpoints, each
/// with mass equal to its cell area and plane spanned by the first d axes.
/// A 2-dimensional measure; used to exercise dimension-mismatch detection.
AtomicVarifold sample_square_cloud(int side_count, int d,
                                   std::optional<Box> domain = std::nullopt);

}  // namespace gmt
