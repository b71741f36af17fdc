#include "gmt/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gmt {

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

void SymMatrix::add_outer(std::span<const double> u, double w) {
    for (int i = 0; i < n_; ++i) {
        const double wi = w * u[i];
        a_[idx(i, i)] += wi * u[i];
        for (int j = i + 1; j < n_; ++j) {
            const double v = wi * u[j];
            a_[idx(i, j)] += v;
            a_[idx(j, i)] += v;
        }
    }
}

void SymMatrix::add_scaled(const SymMatrix& other, double w) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += w * other.a_[k];
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += a_[idx(i, i)];
    return t;
}

double SymMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

Vec SymMatrix::apply(std::span<const double> v) const {
    Vec out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += a_[idx(i, j)] * v[j];
        out[i] = s;
    }
    return out;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix out = a;
    out.add_scaled(b, -1.0);
    return out;
}

Plane::Plane(int d, int n, std::vector<double> basis)
    : n_(n), d_(d), basis_(std::move(basis)), projector_(n) {
    for (int k = 0; k < d_; ++k) projector_.add_outer(basis_vector(k), 1.0);
}

Plane Plane::from_basis(const std::vector<Vec>& vectors) {
    if (vectors.empty()) throw ValidationError("plane_from_basis: no vectors given");
    const int n = static_cast<int>(vectors.front().size());
    const int d = static_cast<int>(vectors.size());
    if (n < 2) throw ValidationError("plane_from_basis: ambient dimension must be >= 2");
    if (d >= n) {
        throw ValidationError("plane_from_basis: plane dimension " + std::to_string(d) +
                              " must be below ambient dimension " + std::to_string(n));
    }
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != n) {
            throw ValidationError("plane_from_basis: vectors of mixed dimension");
        }
    }

    std::vector<double> basis;
    basis.reserve(static_cast<std::size_t>(d) * n);
    int rank = 0;
    for (const auto& v : vectors) {
        Vec r = v;
        const double vnorm = norm(v);
        // Two passes of modified Gram-Schmidt against the accepted vectors.
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < rank; ++k) {
                std::span<const double> q(basis.data() + static_cast<std::size_t>(k) * n, n);
                const double c = dot(q, r);
                for (int i = 0; i < n; ++i) r[i] -= c * q[i];
            }
        }
        const double res = norm(r);
        if (!(vnorm > 0.0) || !std::isfinite(vnorm) || res < 1e-10 * vnorm) continue;
        for (int i = 0; i < n; ++i) basis.push_back(r[i] / res);
        ++rank;
    }
    if (rank < d) {
        throw NumericError("degenerate frame: numerical rank " + std::to_string(rank) + " < " +
                           std::to_string(d) + " (residual threshold 1e-10)");
    }
    return Plane(d, n, std::move(basis));
}

Plane Plane::from_orthonormal(const std::vector<Vec>& vectors) {
    Plane checked = from_basis(vectors);
    for (std::size_t a = 0; a < vectors.size(); ++a) {
        for (std::size_t b = a; b < vectors.size(); ++b) {
            const double g = dot(vectors[a], vectors[b]);
            if (std::abs(g - (a == b ? 1.0 : 0.0)) > 1e-12) return checked;
        }
    }
    std::vector<double> basis;
    for (const auto& v : vectors) basis.insert(basis.end(), v.begin(), v.end());
    return Plane(checked.dim(), checked.ambient_dim(), std::move(basis));
}

Plane Plane::axes(int d, int n) {
    std::vector<Vec> vs;
    for (int k = 0; k < d; ++k) {
        Vec e(n, 0.0);
        e[k] = 1.0;
        vs.push_back(std::move(e));
    }
    return from_basis(vs);
}

Vec Plane::project(std::span<const double> v) const {
    Vec out(n_, 0.0);
    for (int k = 0; k < d_; ++k) {
        const auto b = basis_vector(k);
        const double c = dot(b, v);
        for (int i = 0; i < n_; ++i) out[i] += c * b[i];
    }
    return out;
}

namespace {

void check_same_shape(const Plane& p, const Plane& q) {
    if (p.dim() != q.dim() || p.ambient_dim() != q.ambient_dim()) {
        throw ValidationError("planes of different (d,n): (" + std::to_string(p.dim()) + "," +
                              std::to_string(p.ambient_dim()) + ") vs (" + std::to_string(q.dim()) +
                              "," + std::to_string(q.ambient_dim()) + ")");
    }
}

}  // namespace

double plane_dist(const Plane& p, const Plane& q, PlaneNorm norm_kind) {
    check_same_shape(p, q);
    const SymMatrix diff = p.projector() - q.projector();
    return norm_kind == PlaneNorm::frobenius ? diff.frobenius_norm() : spectral_norm(diff);
}

double principal_angle(const Plane& p, const Plane& q) {
    return std::asin(std::min(1.0, plane_dist(p, q, PlaneNorm::op)));
}

SymEigen jacobi_eigen(const SymMatrix& m) {
    const int n = m.size();
    std::vector<double> a(m.data().begin(), m.data().end());
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
    auto at = [n](std::vector<double>& x, int i, int j) -> double& { return x[i * n + j]; };

    const double fro = m.frobenius_norm();
    int sweep = 0;
    for (; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * at(a, p, q) * at(a, p, q);
        if (std::sqrt(off) <= 1e-12 * fro) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (apq == 0.0) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(a, k, p), akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(a, p, k), aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                at(a, p, q) = 0.0;
                at(a, q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double vkp = at(v, k, p), vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return at(a, i, i) > at(a, j, j); });

    SymEigen out;
    out.sweeps = sweep;
    for (int k : order) {
        out.values.push_back(at(a, k, k));
        Vec col(n);
        for (int i = 0; i < n; ++i) col[i] = at(v, i, k);
        // sign convention: largest-magnitude component positive
        int big = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(col[i]) > std::abs(col[big]) + 1e-14) big = i;
        if (col[big] < 0.0)
            for (double& x : col) x = -x;
        out.vectors.push_back(std::move(col));
    }
    return out;
}

PrincipalSubspace principal_subspace(const SymMatrix& m, int d) {
    const int n = m.size();
    if (d < 1 || d >= n) {
        throw ValidationError("principal_subspace: need 1 <= d < n, got d=" + std::to_string(d) +
                              " n=" + std::to_string(n));
    }
    SymEigen eig = jacobi_eigen(m);
    std::vector<Vec> top(eig.vectors.begin(), eig.vectors.begin() + d);
    const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    const double gap = eig.values[d - 1] - eig.values[d];
    return PrincipalSubspace{Plane::from_basis(top), std::move(eig.values),
                             gap <= kDegenerateGapTol * scale};
}

double spectral_norm(const SymMatrix& m) {
    const SymEigen eig = jacobi_eigen(m);
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

PrincipalSubspace mean_plane_detail(std::span<const std::pair<Plane, double>> entries) {
    if (entries.empty()) throw NumericError("empty cell: no planes to average");
    const int n = entries.front().first.ambient_dim();
    const int d = entries.front().first.dim();
    SymMatrix acc(n);
    double total = 0.0;
    for (const auto& [plane, w] : entries) {
        if (plane.dim() != d || plane.ambient_dim() != n) {
            throw ValidationError("mean_plane: entries of mixed (d,n)");
        }
        if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("mean_plane: negative weight");
        if (w == 0.0) continue;
        acc.add_scaled(plane.projector(), w);
        total += w;
    }
    if (!(total > 0.0)) throw NumericError("empty cell: all weights are zero");
    SymMatrix mean(n);
    mean.add_scaled(acc, 1.0 / total);
    return principal_subspace(mean, d);
}

Plane mean_plane(std::span<const std::pair<Plane, double>> entries) {
    return mean_plane_detail(entries).plane;
}

}  // namespace gmt
