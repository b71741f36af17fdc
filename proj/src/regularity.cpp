#include "gmt/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "gmt/energy.hpp"
#include "gmt/grassmann.hpp"
#include "gmt/parallel.hpp"

namespace gmt {

double unit_ball_volume(int d) {
    if (d < 0) throw ValidationError("unit_ball_volume: negative dimension");
    if (d == 0) return 1.0;
    if (d == 1) return 2.0;
    return unit_ball_volume(d - 2) * 2.0 * std::numbers::pi / d;
}

std::vector<DensityRatio> density_ratios(const AtomicVarifold& v, std::span<const double> x,
                                         std::span<const double> radii) {
    const double reach = v.domain().distance_to_complement(x);
    const double omega = unit_ball_volume(v.dim());
    std::vector<DensityRatio> out;
    out.reserve(radii.size());
    for (double r : radii) {
        if (!(r > 0.0)) throw ValidationError("density_ratios: radii must be positive");
        if (r >= reach) {
            out.push_back(DensityRatio{r, 0.0, false});
            continue;
        }
        out.push_back(DensityRatio{r, mass_in_ball(v, x, r) / (omega * std::pow(r, v.dim())), true});
    }
    return out;
}

namespace {

/// Mass-weighted draws of atom indices (with replacement).
std::vector<std::size_t> sample_atoms(const AtomicVarifold& v, int count, std::uint64_t seed) {
    std::vector<double> cumulative(v.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) cumulative[j] = acc += v.mass(j);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> picks;
    picks.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double u = uniform01(rng) * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        picks.push_back(std::min<std::size_t>(it - cumulative.begin(), v.size() - 1));
    }
    return picks;
}

constexpr int kAhlforsRadii = 32;

}  // namespace

AhlforsConstants ahlfors_constants(const AtomicVarifold& v, double beta_cut, int sample, std::uint64_t seed,
                                   int threads) {
    if (!(beta_cut > 0.0)) throw ValidationError("ahlfors_constants: beta_cut must be positive");
    if (sample < 1) throw ValidationError("ahlfors_constants: sample must be >= 1");
    const auto centers = sample_atoms(v, sample, seed);
    const double omega = unit_ball_volume(v.dim());

    struct Extremes {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        std::size_t pairs = 0;
    };
    std::vector<Extremes> per_center(centers.size());
    parallel_for(centers.size(), threads, [&](std::size_t c) {
        const auto x = v.position(centers[c]);
        const double reach = v.domain().distance_to_complement(x);
        if (!(reach > beta_cut)) return;
        std::vector<double> dist2(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) dist2[j] = squared_distance(v.position(j), x);
        Extremes& e = per_center[c];
        for (int k = 0; k < kAhlforsRadii; ++k) {
            const double r = beta_cut * std::pow(reach / beta_cut, (k + 1.0) / (kAhlforsRadii + 1.0));
            const double r2 = r * r;
            double m = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (dist2[j] < r2) m += v.mass(j);
            const double ratio = m / (omega * std::pow(r, v.dim()));
            e.lo = std::min(e.lo, ratio);
            e.hi = std::max(e.hi, ratio);
            ++e.pairs;
        }
    });
    Extremes all;
    for (const Extremes& e : per_center) {
        all.lo = std::min(all.lo, e.lo);
        all.hi = std::max(all.hi, e.hi);
        all.pairs += e.pairs;
    }
    if (all.pairs == 0) {
        throw NumericError("ahlfors_constants: no sampled center lies farther than beta_cut from the boundary");
    }
    return AhlforsConstants{all.lo, all.hi, all.pairs};
}

double jones_beta(std::span<const double> x, double r, const AtomicVarifold& v) {
    if (!(r > 0.0)) throw ValidationError("jones_beta: radius must be positive");
    const int n = v.ambient_dim(), d = v.dim();
    const double r2 = r * r;
    double mass = 0.0;
    Vec centroid(n, 0.0);
    std::vector<std::size_t> inside;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (squared_distance(v.position(j), x) >= r2) continue;
        inside.push_back(j);
        mass += v.mass(j);
        const auto y = v.position(j);
        for (int i = 0; i < n; ++i) centroid[i] += v.mass(j) * y[i];
    }
    if (inside.empty()) return 0.0;
    for (double& c : centroid) c /= mass;
    SymMatrix cov(n);
    for (std::size_t j : inside) cov.add_outer(subtract(v.position(j), centroid), v.mass(j));
    const PrincipalSubspace ps = principal_subspace(cov, d);
    double captured = 0.0;
    for (int k = 0; k < d; ++k) captured += ps.eigenvalues[k];
    const double residual = std::max(0.0, cov.trace() - captured);
    return std::sqrt(residual / std::pow(r, d + 2.0));
}

double jones_radius_floor(std::span<const double> x, const AtomicVarifold& v) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double d2 = squared_distance(v.position(j), x);
        if (d2 < best) {
            best = d2;
            nearest = j;
        }
    }
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j == nearest) continue;
        const double d2 = squared_distance(v.position(j), v.position(nearest));
        if (d2 > 0.0) spacing = std::min(spacing, d2);
    }
    return 2.0 * std::sqrt(spacing);
}

double jones_integral(std::span<const double> x, const AtomicVarifold& v, int r_steps) {
    if (r_steps < 16) throw ValidationError("jones_integral: r_steps must be >= 16");
    const double floor = jones_radius_floor(x, v);
    if (!(floor < 1.0)) return 0.0;
    const double s0 = std::log(floor);
    const double ds = -s0 / r_steps;
    double total = 0.0;
    for (int k = 0; k < r_steps; ++k) {
        const double r = std::exp(s0 + (k + 0.5) * ds);
        const double b = jones_beta(x, r, v);
        total += b * b * ds;
    }
    return total;
}

RegularityReport hypothesis_report(const std::vector<ScaleInput>& seq, int q, const ReportOptions& options) {
    if (seq.empty()) throw ValidationError("hypothesis_report: empty scale sequence");
    for (std::size_t i = 1; i < seq.size(); ++i) {
        if (!(seq[i].alpha < seq[i - 1].alpha)) {
            throw ValidationError("hypothesis_report: alphas must be decreasing (scale " + std::to_string(i) + ")");
        }
    }
    RegularityReport report;
    report.c1_hat = std::numeric_limits<double>::infinity();
    std::vector<AtomicVarifold> atomized;
    atomized.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const ScaleInput& s = seq[i];
        AtomicVarifold atoms = atomize(s.varifold, q);
        const auto c = ahlfors_constants(atoms, s.beta_cut, options.sample, options.seed, options.threads);
        EnergyParams params;
        params.alpha = s.alpha;
        IntegrationOptions io{options.energy_fraction, options.seed, options.threads};
        const double energy = integrated_energy(atoms, atoms, params, io);
        report.scales.push_back(ScaleRow{s.varifold.grid().h(), s.alpha, s.beta_cut, c.c1, c.c2, energy});
        report.c1_hat = std::min(report.c1_hat, c.c1);
        report.c2_hat = std::max(report.c2_hat, c.c2);
        report.energy_sup = std::max(report.energy_sup, energy);
        atomized.push_back(std::move(atoms));
    }
    report.beta_cut = seq.back().beta_cut;

    const AtomicVarifold& finest = atomized.back();
    for (std::size_t j : sample_atoms(finest, options.jones_points, options.seed)) {
        const auto x = finest.position(j);
        report.jones_points.emplace_back(x.begin(), x.end());
    }
    report.jones_integrals.resize(report.jones_points.size());
    parallel_for(report.jones_points.size(), options.threads, [&](std::size_t i) {
        report.jones_integrals[i] = jones_integral(report.jones_points[i], finest, options.jones_steps);
    });

    Verdict& v = report.verdict;
    v.density_band = options.density_band;
    v.density_spread = report.c1_hat > 0.0 ? report.c2_hat / report.c1_hat : std::numeric_limits<double>::infinity();
    v.density_pass = v.density_spread <= options.density_band;

    const std::size_t tail = std::min<std::size_t>(3, report.scales.size());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = report.scales.size() - tail; i < report.scales.size(); ++i) {
        lo = std::min(lo, report.scales[i].integrated_energy);
        hi = std::max(hi, report.scales[i].integrated_energy);
    }
    v.energy_band = options.energy_band;
    v.energy_spread = hi == 0.0 ? 1.0 : (lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
    v.energy_pass = v.energy_spread < options.energy_band;
    v.energy_sup = report.energy_sup;
    v.last_increment = report.scales.size() > 1
                           ? report.scales.back().integrated_energy - report.scales[report.scales.size() - 2].integrated_energy
                           : 0.0;
    return report;
}

std::string format_report(const RegularityReport& report) {
    std::ostringstream os;
    os.precision(6);
    os << "scales: " << report.scales.size() << "\n";
    for (const ScaleRow& s : report.scales) {
        os << "  h=" << s.h << " alpha=" << s.alpha << " beta_cut=" << s.beta_cut << " c1=" << s.c1
           << " c2=" << s.c2 << " integrated_energy=" << s.integrated_energy << "\n";
    }
    os << "c1_hat: " << report.c1_hat << "\n";
    os << "c2_hat: " << report.c2_hat << "\n";
    os << "energy_sup: " << report.energy_sup << "\n";
    os << "jones_integrals:";
    for (double j : report.jones_integrals) os << " " << j;
    os << "\n";
    const Verdict& v = report.verdict;
    os << "density: " << (v.density_pass ? "PASS" : "FAIL") << " (c2/c1 spread " << v.density_spread
       << ", band " << v.density_band << ")\n";
    os << "energy: " << (v.energy_pass ? "PASS" : "FAIL") << " (max/min over last scales " << v.energy_spread
       << ", band " << v.energy_band << ", last increment " << v.last_increment << ")\n";
    os << "verdict: " << (v.pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace gmt
