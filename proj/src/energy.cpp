#include "gmt/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gmt/parallel.hpp"

namespace gmt {

void EnergyParams::validate() const {
    if (!(alpha > 0.0 && alpha <= r_max && r_max <= 1.0)) {
        throw ValidationError("energy params: need 0 < alpha <= r_max <= 1, got alpha=" +
                              std::to_string(alpha) + " r_max=" + std::to_string(r_max));
    }
}

EnergyParams EnergyParams::local(double alpha, const Box& window, const Box& domain) {
    const double gap = box_gap(window, domain);
    if (!(gap > 0.0)) throw ValidationError("energy params: window must lie inside the open domain");
    EnergyParams p;
    p.alpha = alpha;
    p.r_max = std::min(1.0, gap / 2.0);
    p.window = window;
    p.validate();
    return p;
}

double weight_kernel(double rho, const EnergyParams& params, int d) {
    if (rho >= params.r_max) return 0.0;
    const double lower = std::max(params.alpha, rho);
    const double e = d + 2.0;
    return (std::pow(lower, -e) - std::pow(params.r_max, -e)) / e;
}

namespace {

void check_point(std::span<const double> x, const AtomicVarifold& v, const EnergyParams& params) {
    params.validate();
    if (static_cast<int>(x.size()) != v.ambient_dim()) {
        throw ValidationError("energy: evaluation point has wrong dimension");
    }
    if (params.window && !params.window->contains(x)) {
        throw ValidationError("energy: evaluation point outside the window");
    }
}

bool counts(const AtomicVarifold& v, std::size_t j, const EnergyParams& params) {
    return !params.window || params.window->contains_strict(v.position(j));
}

}  // namespace

EnergyReport energy_alpha(std::span<const double> x, const Plane& p, const AtomicVarifold& v,
                          const EnergyParams& params, bool per_atom) {
    check_point(x, v, params);
    if (p.ambient_dim() != v.ambient_dim() || p.dim() != v.dim()) {
        throw ValidationError("energy: plane is not in G(d,n) of the varifold");
    }
    EnergyReport report;
    report.params = params;
    if (per_atom) report.contributions.assign(v.size(), 0.0);
    const int d = v.dim();
    const double r2max = params.r_max * params.r_max;
    Vec diff(v.ambient_dim());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!counts(v, j, params)) continue;
        const auto y = v.position(j);
        double rho2 = 0.0;
        for (std::size_t i = 0; i < diff.size(); ++i) {
            diff[i] = y[i] - x[i];
            rho2 += diff[i] * diff[i];
        }
        if (rho2 >= r2max) continue;
        const double c =
            v.mass(j) * squared_dist_point_to_plane(p, diff) * weight_kernel(std::sqrt(rho2), params, d);
        report.value += c;
        if (per_atom) report.contributions[j] = c;
    }
    return report;
}

double energy_alpha_oracle(std::span<const double> x, const Plane& p, const AtomicVarifold& v,
                           const EnergyParams& params, int steps) {
    check_point(x, v, params);
    if (steps < 10) throw ValidationError("energy oracle: steps must be >= 10");
    const int d = v.dim();

    struct Sample {
        double rho;
        double weight;  // m_j d_j^2
    };
    std::vector<Sample> samples;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!counts(v, j, params)) continue;
        const Vec diff = subtract(v.position(j), x);
        const double dist = dist_point_to_plane(p, diff);
        samples.push_back(Sample{norm(diff), v.mass(j) * dist * dist});
    }
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.rho < b.rho; });

    const double dr = (params.r_max - params.alpha) / steps;
    double inside = 0.0;  // sum of m_j d_j^2 over the open ball of radius r
    std::size_t next = 0;
    double total = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double r = params.alpha + (k + 0.5) * dr;
        while (next < samples.size() && samples[next].rho < r) inside += samples[next++].weight;
        total += inside * std::pow(r, -(d + 3.0)) * dr;
    }
    return total;
}

double height_excess(std::span<const double> x, const Plane& p, const AtomicVarifold& v, double r) {
    if (!(r > 0.0)) throw ValidationError("height_excess: radius must be positive");
    const double r2 = r * r;
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const Vec diff = subtract(v.position(j), x);
        if (dot(diff, diff) >= r2) continue;
        const double dist = dist_point_to_plane(p, diff);
        s += v.mass(j) * dist * dist;
    }
    return s / std::pow(r, v.dim() + 2.0);
}

double integrated_energy(const AtomicVarifold& v_eval, const AtomicVarifold& v_mass,
                         const EnergyParams& params, const IntegrationOptions& options) {
    if (v_eval.ambient_dim() != v_mass.ambient_dim() || v_eval.dim() != v_mass.dim()) {
        throw ValidationError("integrated_energy: varifolds of different (d,n)");
    }
    params.validate();
    if (!(options.fraction > 0.0 && options.fraction <= 1.0)) {
        throw ValidationError("integrated_energy: subsample fraction must be in (0,1]");
    }
    const std::size_t count = v_eval.size();
    std::vector<std::size_t> chosen(count);
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    double reweight = 1.0;
    if (options.fraction < 1.0) {
        const auto k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(options.fraction * static_cast<double>(count))));
        std::mt19937_64 rng(options.seed);
        for (std::size_t i = 0; i < k; ++i) {
            const auto pick = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(count - i));
            std::swap(chosen[i], chosen[std::min(pick, count - 1)]);
        }
        chosen.resize(k);
        std::sort(chosen.begin(), chosen.end());
        reweight = static_cast<double>(count) / static_cast<double>(k);
    }
    std::vector<double> terms(chosen.size());
    parallel_for(chosen.size(), options.threads, [&](std::size_t i) {
        const Atom& a = v_eval.atom(chosen[i]);
        if (params.window && !params.window->contains(a.x)) return;
        terms[i] = a.mass * energy_alpha(a.x, a.plane, v_mass, params).value;
    });
    double total = 0.0;
    for (double t : terms) total += t;
    return total * reweight;
}

}  // namespace gmt
