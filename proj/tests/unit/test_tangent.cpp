#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gmt/tangent.hpp"

using namespace gmt;
using doctest::Approx;

namespace {

Vec random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (double& x : v) x = g(rng);
    const double s = norm(v);
    for (double& x : v) x /= s;
    return v;
}

AtomicVarifold noisy_curve(std::mt19937_64& rng, int n, int d, int count) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<Atom> atoms;
    for (int j = 0; j < count; ++j) {
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = u(rng) * (i < d ? 1.0 : 0.2);
        std::vector<Vec> frame;
        for (int k = 0; k < d; ++k) frame.push_back(random_unit(rng, n));
        atoms.push_back(Atom{x, Plane::from_basis(frame), 0.01 + 0.01 * (j % 5)});
    }
    return AtomicVarifold(n, d, std::move(atoms));
}

Plane random_plane(std::mt19937_64& rng, int d, int n) {
    std::vector<Vec> frame;
    for (int k = 0; k < d; ++k) frame.push_back(random_unit(rng, n));
    return Plane::from_basis(frame);
}

}  // namespace

TEST_CASE("moment matrix") {
    EnergyParams p;
    p.alpha = 0.1;
    const AtomicVarifold one(2, 1, {Atom{{0.5, 0}, Plane::axes(1, 2), 1.0}}, Box{{-2, -2}, {2, 2}});
    const SymMatrix m = moment_matrix(Vec{0, 0}, one, p);
    CHECK(m(0, 0) == Approx(7.0 / 3.0 * 0.25).epsilon(1e-14));
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 1) == 0.0);
    CHECK(moment_matrix(Vec{-1.5, -1.5}, one, p).frobenius_norm() == 0.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const AtomicVarifold v = noisy_curve(rng, 3, 1, 50);
        const SymMatrix mm = moment_matrix(v.atom(0).x, v, p);
        CHECK(jacobi_eigen(mm).values.back() >= -1e-12 * std::max(1.0, mm.frobenius_norm()));
    }
}

TEST_CASE("trace identity") {
    std::mt19937_64 rng(6);
    EnergyParams p;
    p.alpha = 0.05;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 2, d = 1 + (n == 3 ? trial % 2 : 0);
        const AtomicVarifold v = noisy_curve(rng, n, d, 80);
        const Vec x = v.atom(3).x;
        const SymMatrix m = moment_matrix(x, v, p);
        const Plane q = random_plane(rng, d, n);
        double tr_pm = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) tr_pm += q.projector()(i, j) * m(j, i);
        const double expect = energy_alpha(x, q, v, p).value;
        CHECK(m.trace() - tr_pm == Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("estimate_tangent") {
    EnergyParams p;
    p.alpha = 0.05;
    SUBCASE("collinear data") {
        const AtomicVarifold line = sample_line({-1, 0}, {1, 0}, 200);
        const auto e = estimate_tangent(Vec{0.1, 0}, line, p);
        CHECK(plane_dist(e.plane, Plane::axes(1, 2)) < 1e-12);
        CHECK(e.energy == Approx(0.0).scale(1.0));
        CHECK_FALSE(e.degenerate);
    }
    SUBCASE("unit circle at (1,0)") {
        const AtomicVarifold c = sample_circle({0, 0}, 1.0, 10000);
        const auto e = estimate_tangent(Vec{1, 0}, c, p);
        CHECK(principal_angle(e.plane, Plane::from_basis({Vec{0, 1}})) < std::numbers::pi / 180.0);
        const auto oracle = grid_search_oracle(Vec{1, 0}, c, p, 4096);
        CHECK(principal_angle(oracle.plane, Plane::from_basis({Vec{0, 1}})) < std::numbers::pi / 180.0);
    }
    SUBCASE("isotropic cloud is degenerate") {
        const AtomicVarifold sq = sample_square_cloud(40, 1);
        const auto e = estimate_tangent(Vec{0.5, 0.5}, sq, p);
        CHECK(e.degenerate);
    }
    SUBCASE("isolated point") {
        const AtomicVarifold far(2, 1, {Atom{{0, 0}, Plane::axes(1, 2), 1.0}}, Box{{-3, -3}, {3, 3}});
        CHECK_THROWS_WITH_AS(estimate_tangent(Vec{2, 2}, far, p), doctest::Contains("no local data"), NumericError);
    }
    SUBCASE("energy field and eigenvalues") {
        std::mt19937_64 rng(8);
        const AtomicVarifold v = noisy_curve(rng, 3, 2, 200);
        const auto e = estimate_tangent(v.atom(0).x, v, p);
        const SymMatrix m = moment_matrix(v.atom(0).x, v, p);
        CHECK(e.energy == Approx(m.trace() - e.eigenvalues[0] - e.eigenvalues[1]).epsilon(1e-9));
        CHECK(e.energy == Approx(energy_alpha(v.atom(0).x, e.plane, v, p).value).epsilon(1e-9));
        CHECK(e.spectral_gap == Approx(e.eigenvalues[1] - e.eigenvalues[2]));
    }
}

TEST_CASE("the eigen-minimizer beats random planes") {
    std::mt19937_64 rng(9);
    EnergyParams p;
    p.alpha = 0.1;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 2, d = n == 3 ? 1 + trial % 2 : 1;
        const AtomicVarifold v = noisy_curve(rng, n, d, 100);
        const Vec x = v.atom(trial).x;
        const double best = estimate_tangent(x, v, p).energy;
        int violations = 0;
        for (int k = 0; k < 100; ++k) {
            if (best > energy_alpha(x, random_plane(rng, d, n), v, p).value + 1e-9) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("grid search oracle") {
    EnergyParams p;
    p.alpha = 0.1;
    const AtomicVarifold line = sample_line({-1, -0.5, 0.2}, {1, 0.5, -0.2}, 100);
    const auto o = grid_search_oracle(Vec{0, 0, 0}, line, p, 20000);
    CHECK(principal_angle(o.plane, line.atom(0).plane) < 0.05);

    const AtomicVarifold flat = sample_line({-1, 0}, {1, 0}, 100);
    CHECK(grid_search_oracle(Vec{0, 0}, flat, p, 16).energy == 0.0);

    std::mt19937_64 rng(10);
    const AtomicVarifold v = noisy_curve(rng, 2, 1, 100);
    double prev = INFINITY;
    for (int k = 16; k <= 4096; k *= 2) {
        const double e = grid_search_oracle(v.atom(0).x, v, p, k).energy;
        CHECK(e <= prev);
        prev = e;
    }
    CHECK_THROWS_AS(grid_search_oracle(Vec{0, 0}, flat, p, 8), ValidationError);
    const AtomicVarifold r4 = sample_line({0, 0, 0, 0}, {1, 1, 1, 1}, 10);
    CHECK_THROWS_AS(grid_search_oracle(Vec{0.5, 0.5, 0.5, 0.5}, r4, p, 16), ValidationError);

    for (const Vec& u : fibonacci_hemisphere(100)) {
        CHECK(norm(u) == Approx(1.0).epsilon(1e-14));
        CHECK(u[2] > 0.0);
    }
}

TEST_CASE("tangent field") {
    EnergyParams p;
    p.alpha = 0.05;
    const AtomicVarifold c = sample_circle({0, 0}, 1.0, 2000, Box{{-3, -3}, {3, 3}});
    std::vector<Vec> points;
    for (int k = 0; k < 16; ++k) points.push_back(c.atom(k * 125).x);
    points.push_back(Vec{2.9, 2.9});
    const auto one = tangent_field(points, c, p, 1);
    const auto many = tangent_field(points, c, p, 3);
    REQUIRE(one.size() == points.size());
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        REQUIRE(one[i].estimate.has_value());
        CHECK(principal_angle(one[i].estimate->plane, c.atom(i * 125).plane) < std::numbers::pi / 180.0);
        CHECK(one[i].estimate->energy == many[i].estimate->energy);
    }
    CHECK_FALSE(one.back().estimate.has_value());
    CHECK(one.back().error.find("no local data") != std::string::npos);

    // the minimal energy varies continuously along the circle
    double worst = 0.0;
    double prev = one.front().estimate->energy;
    for (int k = 1; k < 50; ++k) {
        const Vec x = c.atom(k).x;
        const double e = estimate_tangent(x, c, p).energy;
        worst = std::max(worst, std::abs(e - prev));
        prev = e;
    }
    CHECK(worst <= 1e-6 * std::max(1.0, prev));
}
