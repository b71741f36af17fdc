#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmt/energy.hpp"
#include "gmt/grassmann.hpp"
#include "gmt/varifold.hpp"

namespace gmt {

/// M = sum_j m_j W(rho_j) (y_j - x)(y_j - x)^T. Since
/// d(y-x,P)^2 = |y-x|^2 - |Pi_P(y-x)|^2, the energy at any plane is
/// E_alpha(x,P) = trace(M) - trace(Pi_P M).
SymMatrix moment_matrix(std::span<const double> x, const AtomicVarifold& v, const EnergyParams& params);

struct TangentEstimate {
    Plane plane;
    double energy = 0.0;
    Vec eigenvalues;  // descending
    double spectral_gap = 0.0;
    bool degenerate = false;
};

/// Global minimizer of P -> E_alpha(x,P,V) over G(d,n): the dominant
/// d-eigenspace of the moment matrix. Throws NumericError("no local data")
/// when no atom is within r_max of x.
TangentEstimate estimate_tangent(std::span<const double> x, const AtomicVarifold& v,
                                 const EnergyParams& params);

struct SampledMinimum {
    Plane plane;
    double energy;
};

/// Brute-force minimum of E_alpha over k sampled planes: k equispaced angles
/// in G(1,2); k Fibonacci-sphere directions (lines) or normals (planes) in
/// G(1,3) and G(2,3).
SampledMinimum grid_search_oracle(std::span<const double> x, const AtomicVarifold& v,
                                  const EnergyParams& params, int k);

/// k quasi-uniform unit vectors on the upper half of S^2 (Fibonacci
/// lattice), one representative per line through the origin.
std::vector<Vec> fibonacci_hemisphere(int k);

struct TangentFieldEntry {
    std::optional<TangentEstimate> estimate;
    std::string error;
};

/// estimate_tangent at every point; failures are recorded per entry.
std::vector<TangentFieldEntry> tangent_field(const std::vector<Vec>& points, const AtomicVarifold& v_mass,
                                             const EnergyParams& params, int threads = 1);

}  // namespace gmt
