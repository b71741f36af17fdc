#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gmt/energy.hpp"

using namespace gmt;
using doctest::Approx;

namespace {

const Plane kYAxis = Plane::from_basis({Vec{0, 1}});

AtomicVarifold single_atom() {
    return AtomicVarifold(2, 1, {Atom{{0.5, 0}, Plane::axes(1, 2), 1.0}}, Box{{-2, -2}, {2, 2}});
}

/// Plain midpoint rule for int_a^b r^{-(d+3)} dr, independent of the kernel.
double kernel_quadrature(double a, double b, int d, int steps) {
    const double dr = (b - a) / steps;
    double s = 0.0;
    for (int k = 0; k < steps; ++k) s += std::pow(a + (k + 0.5) * dr, -(d + 3.0)) * dr;
    return s;
}

AtomicVarifold random_cloud(std::mt19937_64& rng, int n, int count) {
    std::uniform_real_distribution<double> u(-0.6, 0.6), m(0.01, 0.1);
    std::normal_distribution<double> g;
    std::vector<Atom> atoms;
    for (int j = 0; j < count; ++j) {
        Vec x(n), t(n);
        for (int i = 0; i < n; ++i) {
            x[i] = u(rng);
            t[i] = g(rng);
        }
        atoms.push_back(Atom{x, Plane::from_basis({t}), m(rng)});
    }
    return AtomicVarifold(n, 1, std::move(atoms));
}

/// Worst-case error of the midpoint oracle: each atom's radius contributes a
/// jump of height m d^2 rho^{-(d+3)} that the rule can misplace by one step,
/// plus the smooth midpoint remainder on [alpha, r_max].
double oracle_error_bound(std::span<const double> x, const Plane& p, const AtomicVarifold& v, const EnergyParams& params,
                          int steps) {
    const int d = v.dim();
    const double dr = (params.r_max - params.alpha) / steps;
    double jumps = 0.0, held = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const Vec diff = subtract(v.atom(j).x, x);
        const double rho = norm(diff);
        if (rho >= params.r_max) continue;
        const double w = v.mass(j) * squared_dist_point_to_plane(p, diff);
        held += w;
        if (rho >= params.alpha) jumps += w * std::pow(rho, -(d + 3.0)) * dr;
    }
    const double curvature = (d + 3.0) * (d + 4.0) * std::pow(params.alpha, -(d + 5.0));
    return jumps + held * curvature * dr * dr * (params.r_max - params.alpha) / 24.0;
}

}  // namespace

TEST_CASE("weight kernel") {
    EnergyParams p;
    p.alpha = 0.1;
    CHECK(weight_kernel(1.0, p, 1) == 0.0);
    CHECK(weight_kernel(1.5, p, 1) == 0.0);
    CHECK(weight_kernel(0.5, p, 1) == Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(weight_kernel(0.5, p, 1) == Approx(kernel_quadrature(0.5, 1.0, 1, 200000)).epsilon(1e-9));
    const double plateau = (std::pow(0.1, -3.0) - 1.0) / 3.0;
    CHECK(weight_kernel(0.0, p, 1) == Approx(plateau).epsilon(1e-14));
    CHECK(weight_kernel(0.05, p, 1) == Approx(plateau).epsilon(1e-14));
    double prev = weight_kernel(0.0, p, 2);
    for (int k = 1; k <= 120; ++k) {
        const double w = weight_kernel(0.01 * k, p, 2);
        CHECK(w <= prev);
        prev = w;
    }
}

TEST_CASE("energy_alpha examples") {
    EnergyParams p;
    p.alpha = 0.1;
    const AtomicVarifold v = single_atom();
    CHECK(energy_alpha(Vec{0, 0}, kYAxis, v, p).value == Approx(7.0 / 12.0).epsilon(1e-14));
    CHECK(std::abs(energy_alpha_oracle(Vec{0, 0}, kYAxis, v, p, 100000) - 7.0 / 12.0) <=
          oracle_error_bound(Vec{0, 0}, kYAxis, v, p, 100000));
    CHECK(energy_alpha(Vec{0, 0}, Plane::axes(1, 2), v, p).value == 0.0);

    const AtomicVarifold line = sample_line({-1, 0.2}, {1, 0.2}, 100);
    CHECK(energy_alpha(Vec{0.013, 0.2}, Plane::axes(1, 2), line, p).value == 0.0);

    EnergyParams flat;
    flat.alpha = 1.0;
    CHECK(energy_alpha(Vec{0, 0}, kYAxis, v, flat).value == 0.0);

    // far atoms and an atom coinciding with x contribute nothing
    const AtomicVarifold far(2, 1, {Atom{{1.5, 0}, Plane::axes(1, 2), 1.0}, Atom{{0, 0}, Plane::axes(1, 2), 1.0}});
    CHECK(energy_alpha(Vec{0, 0}, kYAxis, far, p).value == 0.0);
    CHECK(energy_alpha_oracle(Vec{0, 0}, kYAxis, far, p, 1000) == 0.0);

    EnergyParams bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(energy_alpha(Vec{0, 0}, kYAxis, v, bad), ValidationError);
    bad.alpha = 0.5;
    bad.r_max = 0.4;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("per-atom contributions sum to the value") {
    std::mt19937_64 rng(1);
    const AtomicVarifold v = random_cloud(rng, 3, 150);
    EnergyParams p;
    p.alpha = 0.07;
    const Plane q = Plane::from_basis({Vec{0.2, -0.3, 1.0}});
    const auto report = energy_alpha(Vec{0.1, 0.0, -0.1}, q, v, p, true);
    double s = 0.0;
    for (double c : report.contributions) s += c;
    CHECK(s == report.value);
}

TEST_CASE("oracle stays within its quadrature error bound") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a(0.1, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 2;
        const AtomicVarifold v = random_cloud(rng, n, 20 + trial);
        EnergyParams p;
        p.alpha = a(rng);
        const Vec x = v.atom(0).x;
        const Plane& plane = v.atom(trial % v.size()).plane;
        const double exact = energy_alpha(x, plane, v, p).value;
        const double coarse = std::abs(energy_alpha_oracle(x, plane, v, p, 1000) - exact);
        const double fine = std::abs(energy_alpha_oracle(x, plane, v, p, 100000) - exact);
        CHECK(coarse <= oracle_error_bound(x, plane, v, p, 1000) + 1e-12 * exact);
        CHECK(fine <= oracle_error_bound(x, plane, v, p, 100000) + 1e-12 * exact);
        if (exact > 0.0) CHECK(fine <= 1e-4 * exact);
    }
}

TEST_CASE("energy is nonincreasing in alpha") {
    std::mt19937_64 rng(3);
    const AtomicVarifold v = random_cloud(rng, 2, 200);
    const Vec x{0.05, -0.02};
    const Plane q = Plane::from_basis({Vec{1, 0.4}});
    double prev = INFINITY;
    for (int k = 1; k <= 50; ++k) {
        EnergyParams p;
        p.alpha = 0.02 * k;
        const double e = energy_alpha(x, q, v, p).value;
        CHECK(e <= prev);
        prev = e;
        CHECK(energy_alpha_oracle(x, q, v, p, 2000) >= 0.0);
    }
}

TEST_CASE("height excess") {
    const AtomicVarifold v = single_atom();
    CHECK(height_excess(Vec{0, 0}, kYAxis, v, 0.6) == Approx(0.25 / 0.216).epsilon(1e-14));
    CHECK(height_excess(Vec{0, 0}, kYAxis, v, 0.4) == 0.0);
    CHECK(height_excess(Vec{0, 0}, Plane::axes(1, 2), v, 0.6) == 0.0);

    // the energy is the integral of height_excess(r) / r over [alpha, r_max]
    EnergyParams p;
    p.alpha = 0.1;
    const int steps = 20000;
    double s = 0.0;
    const double dr = 0.9 / steps;
    for (int k = 0; k < steps; ++k) {
        const double r = 0.1 + (k + 0.5) * dr;
        s += height_excess(Vec{0, 0}, kYAxis, v, r) / r * dr;
    }
    CHECK(s == Approx(7.0 / 12.0).epsilon(1e-3));
}

TEST_CASE("local variant") {
    const AtomicVarifold v = sample_line({0.05, 0.5}, {0.95, 0.5}, 90, Box{{0, 0}, {1, 1}});
    const Box w{{0.4, 0.4}, {0.6, 0.6}};
    const EnergyParams p = EnergyParams::local(0.01, w, v.domain());
    CHECK(p.r_max == Approx(0.2));
    CHECK(p.window.has_value());
    CHECK(energy_alpha(Vec{0.5, 0.5}, kYAxis, v, p).value ==
          Approx(energy_alpha(Vec{0.5, 0.5}, kYAxis, restrict(v, w), p).value).epsilon(1e-14));
    CHECK_THROWS_AS(energy_alpha(Vec{0.9, 0.5}, kYAxis, v, p), ValidationError);
    CHECK_THROWS_AS(EnergyParams::local(0.01, Box{{-0.1, 0.4}, {0.5, 0.6}}, v.domain()), ValidationError);
}

TEST_CASE("integrated energy") {
    EnergyParams p;
    p.alpha = 0.1;
    const AtomicVarifold flat = sample_line({0.0, 0.0}, {1.0, 0.0}, 200);
    CHECK(integrated_energy(flat, flat, p) == 0.0);

    const AtomicVarifold eval(2, 1, {Atom{{0, 0}, kYAxis, 0.4}}, Box{{-2, -2}, {2, 2}});
    CHECK(integrated_energy(eval, single_atom(), p) == Approx(0.4 * 7.0 / 12.0).epsilon(1e-14));

    const AtomicVarifold c = sample_circle({0, 0}, 0.5, 400);
    const double full = integrated_energy(c, c, p);
    CHECK(integrated_energy(c, c, p, {1.0, 99, 1}) == full);
    CHECK(integrated_energy(c, c, p, {1.0, 0, 3}) == full);
    const double half = integrated_energy(c, c, p, {0.5, 7, 1});
    CHECK(half == integrated_energy(c, c, p, {0.5, 7, 2}));
    // rotational symmetry: every atom carries the same energy, so reweighting is exact
    CHECK(half == Approx(full).epsilon(1e-9));
    CHECK_THROWS_AS(integrated_energy(c, c, p, {0.0, 0, 1}), ValidationError);
}

TEST_CASE("energy is spatially continuous over a plane grid") {
    const AtomicVarifold c = sample_circle({0, 0}, 1.0, 4000);
    EnergyParams p;
    p.alpha = 0.1;
    const Vec x{1, 0};
    auto sup_diff = [&](double dist) {
        const double theta = 2.0 * std::asin(dist / 2.0);
        const Vec z{std::cos(theta), std::sin(theta)};
        double worst = 0.0;
        for (int k = 0; k < 64; ++k) {
            const double t = std::numbers::pi * k / 64;
            const Plane q = Plane::from_basis({Vec{std::cos(t), std::sin(t)}});
            worst = std::max(worst, std::abs(energy_alpha(x, q, c, p).value - energy_alpha(z, q, c, p).value));
        }
        return worst;
    };
    CHECK(sup_diff(1e-3) < sup_diff(1e-1));
}
