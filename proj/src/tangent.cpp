#include "gmt/tangent.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gmt/parallel.hpp"

namespace gmt {

SymMatrix moment_matrix(std::span<const double> x, const AtomicVarifold& v, const EnergyParams& params) {
    params.validate();
    if (static_cast<int>(x.size()) != v.ambient_dim()) {
        throw ValidationError("moment_matrix: point has wrong dimension");
    }
    const int n = v.ambient_dim();
    SymMatrix m(n);
    const double r2max = params.r_max * params.r_max;
    Vec diff(n);
    for (std::size_t j = 0; j < v.size(); ++j) {
        const auto y = v.position(j);
        if (params.window && !params.window->contains_strict(y)) continue;
        double rho2 = 0.0;
        for (int i = 0; i < n; ++i) {
            diff[i] = y[i] - x[i];
            rho2 += diff[i] * diff[i];
        }
        if (rho2 >= r2max) continue;
        m.add_outer(diff, v.mass(j) * weight_kernel(std::sqrt(rho2), params, v.dim()));
    }
    return m;
}

TangentEstimate estimate_tangent(std::span<const double> x, const AtomicVarifold& v,
                                 const EnergyParams& params) {
    if (params.window && !params.window->contains(x)) {
        throw ValidationError("estimate_tangent: point outside the window");
    }
    const SymMatrix m = moment_matrix(x, v, params);
    if (m.frobenius_norm() == 0.0) {
        throw NumericError("no local data: no atom within r_max of the evaluation point");
    }
    const int d = v.dim();
    PrincipalSubspace ps = principal_subspace(m, d);
    double captured = 0.0;
    for (int k = 0; k < d; ++k) captured += ps.eigenvalues[k];
    TangentEstimate est;
    est.energy = std::max(0.0, m.trace() - captured);
    est.spectral_gap = ps.eigenvalues[d - 1] - ps.eigenvalues[d];
    est.degenerate = est.spectral_gap < kDegenerateGapTol * ps.eigenvalues.front();
    est.plane = std::move(ps.plane);
    est.eigenvalues = std::move(ps.eigenvalues);
    return est;
}

std::vector<Vec> fibonacci_hemisphere(int k) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec> dirs;
    dirs.reserve(k);
    for (int i = 0; i < k; ++i) {
        const double z = (i + 0.5) / k;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs.push_back(Vec{r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

namespace {

/// Orthonormal pair spanning the plane with unit normal u.
std::vector<Vec> complement_basis(const Vec& u) {
    // Cross with the axis least aligned with u.
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(u[i]) < std::abs(u[axis])) axis = i;
    Vec e(3, 0.0);
    e[axis] = 1.0;
    Vec a{u[1] * e[2] - u[2] * e[1], u[2] * e[0] - u[0] * e[2], u[0] * e[1] - u[1] * e[0]};
    Vec b{u[1] * a[2] - u[2] * a[1], u[2] * a[0] - u[0] * a[2], u[0] * a[1] - u[1] * a[0]};
    return {a, b};
}

}  // namespace

SampledMinimum grid_search_oracle(std::span<const double> x, const AtomicVarifold& v,
                                  const EnergyParams& params, int k) {
    if (k < 16) throw ValidationError("grid_search_oracle: k must be >= 16");
    const int n = v.ambient_dim(), d = v.dim();
    std::vector<Plane> candidates;
    candidates.reserve(k);
    if (n == 2 && d == 1) {
        for (int i = 0; i < k; ++i) {
            const double t = std::numbers::pi * i / k;
            candidates.push_back(Plane::from_basis({Vec{std::cos(t), std::sin(t)}}));
        }
    } else if (n == 3 && d == 1) {
        for (const Vec& u : fibonacci_hemisphere(k)) candidates.push_back(Plane::from_basis({u}));
    } else if (n == 3 && d == 2) {
        for (const Vec& u : fibonacci_hemisphere(k)) candidates.push_back(Plane::from_basis(complement_basis(u)));
    } else {
        throw ValidationError("grid_search_oracle: unsupported (d,n) = (" + std::to_string(d) + "," +
                              std::to_string(n) + ")");
    }
    SampledMinimum best{candidates.front(), std::numeric_limits<double>::infinity()};
    for (const Plane& p : candidates) {
        const double e = energy_alpha(x, p, v, params).value;
        if (e < best.energy) best = SampledMinimum{p, e};
    }
    return best;
}

std::vector<TangentFieldEntry> tangent_field(const std::vector<Vec>& points, const AtomicVarifold& v_mass,
                                             const EnergyParams& params, int threads) {
    std::vector<TangentFieldEntry> out(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        try {
            out[i].estimate = estimate_tangent(points[i], v_mass, params);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

}  // namespace gmt
