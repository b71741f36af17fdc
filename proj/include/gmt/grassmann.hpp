#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gmt/common.hpp"

namespace gmt {

/// Dense symmetric n x n matrix. Writes go through set/add, which mirror the
/// entry, so the stored matrix is exactly symmetric.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    static SymMatrix identity(int n);

    int size() const { return n_; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }
    void add(int i, int j, double v) {
        a_[idx(i, j)] += v;
        if (i != j) a_[idx(j, i)] += v;
    }

    /// this += w * u u^T
    void add_outer(std::span<const double> u, double w);
    /// this += w * other
    void add_scaled(const SymMatrix& other, double w);

    double trace() const;
    double frobenius_norm() const;
    Vec apply(std::span<const double> v) const;

    /// Row-major entries (n*n).
    std::span<const double> data() const { return a_; }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    int n_ = 0;
    std::vector<double> a_;
};

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);

/// A point of the Grassmannian G(d,n): an orthonormal d-frame in R^n together
/// with the cached orthogonal projector onto its span.
class Plane {
public:
    Plane() = default;

    /// Orthonormalizes `vectors` (modified Gram-Schmidt, one reorthogonalization
    /// pass). Throws NumericError("degenerate frame ...") when a vector's
    /// residual falls below 1e-10 of its norm, and ValidationError for bad
    /// dimensions.
    static Plane from_basis(const std::vector<Vec>& vectors);

    /// Keeps `vectors` bit-for-bit when their Gram matrix is the identity to
    /// within 1e-12 (e.g. a basis read back from a file); otherwise behaves
    /// like from_basis.
    static Plane from_orthonormal(const std::vector<Vec>& vectors);

    /// Span of the first d canonical axes of R^n.
    static Plane axes(int d, int n);

    int ambient_dim() const { return n_; }
    int dim() const { return d_; }

    std::span<const double> basis_vector(int k) const {
        return std::span<const double>(basis_).subspan(static_cast<std::size_t>(k) * n_, n_);
    }
    /// Row-major d x n orthonormal basis.
    std::span<const double> basis() const { return basis_; }
    const SymMatrix& projector() const { return projector_; }

    Vec project(std::span<const double> v) const;

private:
    Plane(int d, int n, std::vector<double> basis);

    int n_ = 0;
    int d_ = 0;
    std::vector<double> basis_;
    SymMatrix projector_;
};

enum class PlaneNorm { frobenius, op };

/// |v - Pi_P v|^2, computed through the cached projector without allocating.
inline double squared_dist_point_to_plane(const Plane& p, std::span<const double> v) {
    const SymMatrix& proj = p.projector();
    const int n = proj.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = v[i];
        for (int j = 0; j < n; ++j) r -= proj(i, j) * v[j];
        s += r * r;
    }
    return s;
}

/// |v - Pi_P v|
inline double dist_point_to_plane(const Plane& p, std::span<const double> v) {
    return std::sqrt(squared_dist_point_to_plane(p, v));
}

/// ||Pi_P - Pi_Q|| in the chosen matrix norm (Frobenius by default).
double plane_dist(const Plane& p, const Plane& q, PlaneNorm norm = PlaneNorm::frobenius);

/// Largest principal angle between two planes of equal (d,n), in radians.
double principal_angle(const Plane& p, const Plane& q);

struct SymEigen {
    Vec values;                 // descending
    std::vector<Vec> vectors;   // vectors[k] pairs with values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi eigen-decomposition. Stops once the off-diagonal norm is
/// below 1e-12 of the Frobenius norm. Eigenvalues are sorted descending with
/// a stable sort, so ties keep the sweep order of the canonical axes.
SymEigen jacobi_eigen(const SymMatrix& m);

/// Spectral gap below which a principal subspace is reported as non-unique,
/// relative to the largest eigenvalue magnitude.
inline constexpr double kDegenerateGapTol = 1e-6;

struct PrincipalSubspace {
    Plane plane;
    Vec eigenvalues;  // descending, all n of them
    bool degenerate = false;
};

/// Dominant d-dimensional eigenspace of a symmetric matrix.
PrincipalSubspace principal_subspace(const SymMatrix& m, int d);

/// Largest eigenvalue magnitude of a symmetric matrix.
double spectral_norm(const SymMatrix& m);

/// Minimizer of sum_j w_j ||Pi_P - Pi_j||_F^2, i.e. the dominant d-subspace of
/// the weighted mean projector. Throws NumericError("empty cell") when every
/// weight is zero.
PrincipalSubspace mean_plane_detail(std::span<const std::pair<Plane, double>> entries);
Plane mean_plane(std::span<const std::pair<Plane, double>> entries);

}  // namespace gmt
