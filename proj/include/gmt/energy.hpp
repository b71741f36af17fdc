#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gmt/grassmann.hpp"
#include "gmt/varifold.hpp"

namespace gmt {

/// Scale window of the alpha-approximate averaged height excess: radii
/// r in [alpha, r_max], optionally restricted to atoms inside `window`.
struct EnergyParams {
    double alpha = 0.1;
    double r_max = 1.0;
    std::optional<Box> window;

    /// Throws ValidationError unless 0 < alpha <= r_max <= 1.
    void validate() const;

    /// Local variant on window w of domain: r_max = min(1, gap(w, domain^c)/2).
    static EnergyParams local(double alpha, const Box& window, const Box& domain);
};

struct EnergyReport {
    double value = 0.0;
    std::vector<double> contributions;  // per atom, only when requested
    EnergyParams params;
};

/// W(rho) = int_{max(alpha,rho)}^{r_max} r^{-(d+3)} dr, and 0 for rho >= r_max.
double weight_kernel(double rho, const EnergyParams& params, int d);

/// E_alpha(x,P,V) = sum_j m_j d(y_j - x, P)^2 W(|y_j - x|). The radial
/// integral is done in closed form, so the value is exact for atomic data.
EnergyReport energy_alpha(std::span<const double> x, const Plane& p, const AtomicVarifold& v,
                          const EnergyParams& params, bool per_atom = false);

/// Independent check of energy_alpha: midpoint rule in r over [alpha, r_max]
/// of r^{-(d+1)} * sum_{|y_j-x|<r} m_j (d(y_j-x,P)/r)^2.
double energy_alpha_oracle(std::span<const double> x, const Plane& p, const AtomicVarifold& v,
                           const EnergyParams& params, int steps);

/// r^{-d} sum_{|y_j-x|<r} m_j (d(y_j-x,P)/r)^2.
double height_excess(std::span<const double> x, const Plane& p, const AtomicVarifold& v, double r);

struct IntegrationOptions {
    double fraction = 1.0;   // share of eval atoms used; reweighted by N/k
    std::uint64_t seed = 0;
    int threads = 1;
};

/// sum_i m_i E_alpha(x_i, P_i, v_mass) over the atoms of v_eval.
double integrated_energy(const AtomicVarifold& v_eval, const AtomicVarifold& v_mass,
                         const EnergyParams& params, const IntegrationOptions& options = {});

}  // namespace gmt
