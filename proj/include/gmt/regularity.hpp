#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmt/gridding.hpp"
#include "gmt/varifold.hpp"

namespace gmt {

/// Volume of the unit ball in R^d: omega_0 = 1, omega_1 = 2,
/// omega_d = omega_{d-2} * 2 pi / d.
double unit_ball_volume(int d);

struct DensityRatio {
    double r;
    double ratio;  // ||V||(B_r(x)) / (omega_d r^d); 0 when !valid
    bool valid;    // false when r >= d(x, domain^c)
};

std::vector<DensityRatio> density_ratios(const AtomicVarifold& v, std::span<const double> x,
                                         std::span<const double> radii);

struct AhlforsConstants {
    double c1;
    double c2;
    std::size_t pairs;  // number of (x, r) samples that entered the min/max
};

/// Extremes of the density ratio over `sample` mass-weighted random atom
/// centers and, per center, 32 log-spaced radii strictly inside
/// (beta_cut, d(x, domain^c)).
AhlforsConstants ahlfors_constants(const AtomicVarifold& v, double beta_cut, int sample, std::uint64_t seed,
                                   int threads = 1);

/// Jones L^2 beta number with the atomic mass standing in for H^d:
/// beta_2(x,r)^2 = inf over affine d-planes A of r^{-d} sum_{|y_j-x|<r} m_j (d(y_j,A)/r)^2.
/// The infimum is attained through the mass centroid by the dominant
/// d-eigenspace of the centered second moment. Returns 0 for an empty ball.
double jones_beta(std::span<const double> x, double r, const AtomicVarifold& v);

/// Twice the nearest-neighbor distance of the atom closest to x.
double jones_radius_floor(std::span<const double> x, const AtomicVarifold& v);

/// Midpoint rule in log r of beta_2(x,r)^2 dr/r over [r_floor, 1].
double jones_integral(std::span<const double> x, const AtomicVarifold& v, int r_steps);

struct ScaleInput {
    DiscreteVarifold varifold;
    double alpha;
    double beta_cut;
};

struct ScaleRow {
    double h;
    double alpha;
    double beta_cut;
    double c1;
    double c2;
    double integrated_energy;
};

struct Verdict {
    bool density_pass;
    double density_spread;  // max c2 / min c1 over all scales
    double density_band;
    bool energy_pass;
    double energy_spread;   // max / min integrated energy over the last <= 3 scales
    double energy_band;
    double energy_sup;
    double last_increment;  // E_last - E_previous (0 for one scale)
    bool pass() const { return density_pass && energy_pass; }
};

struct RegularityReport {
    std::vector<ScaleRow> scales;
    double c1_hat = 0.0;
    double c2_hat = 0.0;
    double beta_cut = 0.0;                // of the finest scale
    std::vector<Vec> jones_points;        // sampled on the finest scale
    std::vector<double> jones_integrals;
    double energy_sup = 0.0;
    Verdict verdict{};
};

struct ReportOptions {
    int sample = 64;         // Ahlfors centers per scale
    int jones_points = 8;
    int jones_steps = 32;
    std::uint64_t seed = 1;
    double density_band = 4.0;
    double energy_band = 2.0;
    double energy_fraction = 1.0;
    int threads = 1;
};

/// Checks both hypotheses of the multiscale rectifiability criterion on a
/// sequence of discrete varifolds: (i) two-sided density bounds above each
/// beta_cut with constants that stay within `density_band`, (ii) integrated
/// alpha-energies that stay within `energy_band` over the last scales.
RegularityReport hypothesis_report(const std::vector<ScaleInput>& seq, int q, const ReportOptions& options = {});

std::string format_report(const RegularityReport& report);

}  // namespace gmt
