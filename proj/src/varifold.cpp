#include "gmt/varifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gmt {

bool Box::contains(std::span<const double> x) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

bool Box::contains_strict(std::span<const double> x) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
    return true;
}

double Box::distance_to_complement(std::span<const double> x) const {
    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) dist = std::min({dist, x[i] - lo[i], hi[i] - x[i]});
    return dist;
}

double Box::diameter() const { return std::sqrt(squared_distance(lo, hi)); }

double box_gap(const Box& inner, const Box& outer) {
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inner.dim(); ++i)
        gap = std::min({gap, inner.lo[i] - outer.lo[i], outer.hi[i] - inner.hi[i]});
    return gap;
}

AtomicVarifold::AtomicVarifold(int n, int d, std::vector<Atom> atoms, std::optional<Box> domain)
    : n_(n), d_(d), atoms_(std::move(atoms)) {
    if (n < 2 || d < 1 || d >= n) {
        throw ValidationError("varifold: need 1 <= d < n with n >= 2, got d=" + std::to_string(d) +
                              " n=" + std::to_string(n));
    }
    if (atoms_.empty()) throw ValidationError("varifold: no atoms");

    positions_.reserve(atoms_.size() * n_);
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
        const Atom& a = atoms_[j];
        if (static_cast<int>(a.x.size()) != n_) {
            throw ValidationError("varifold: atom " + std::to_string(j) + " has wrong dimension");
        }
        if (a.plane.dim() != d_ || a.plane.ambient_dim() != n_) {
            throw ValidationError("varifold: atom " + std::to_string(j) + " plane is not in G(" +
                                  std::to_string(d_) + "," + std::to_string(n_) + ")");
        }
        if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
            throw ValidationError("varifold: atom " + std::to_string(j) + " has nonpositive mass");
        }
        for (double c : a.x) {
            if (!std::isfinite(c)) {
                throw ValidationError("varifold: atom " + std::to_string(j) + " is not finite");
            }
        }
        positions_.insert(positions_.end(), a.x.begin(), a.x.end());
        total_mass_ += a.mass;
    }

    if (domain) {
        if (domain->dim() != n_ || static_cast<int>(domain->hi.size()) != n_) {
            throw ValidationError("varifold: domain dimension mismatch");
        }
        for (int i = 0; i < n_; ++i) {
            if (!(domain->lo[i] < domain->hi[i])) throw ValidationError("varifold: empty domain box");
        }
        domain_ = *domain;
        for (std::size_t j = 0; j < atoms_.size(); ++j) {
            if (!domain_.contains(atoms_[j].x)) {
                throw ValidationError("varifold: atom " + std::to_string(j) + " lies outside the domain");
            }
        }
    } else {
        Vec lo = atoms_.front().x, hi = atoms_.front().x;
        for (const Atom& a : atoms_) {
            for (int i = 0; i < n_; ++i) {
                lo[i] = std::min(lo[i], a.x[i]);
                hi[i] = std::max(hi[i], a.x[i]);
            }
        }
        double side = 0.0;
        for (int i = 0; i < n_; ++i) side = std::max(side, hi[i] - lo[i]);
        const double pad = side > 0.0 ? 0.1 * side : 1.0;
        for (int i = 0; i < n_; ++i) {
            lo[i] -= pad;
            hi[i] += pad;
        }
        domain_ = Box{std::move(lo), std::move(hi)};
    }
}

double mass_in_ball(const AtomicVarifold& v, std::span<const double> center, double r) {
    if (!(r > 0.0)) throw ValidationError("mass_in_ball: radius must be positive");
    const double r2 = r * r;
    double m = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (squared_distance(v.position(j), center) < r2) m += v.mass(j);
    return m;
}

AtomicVarifold restrict(const AtomicVarifold& v, const Box& box) {
    if (box.dim() != v.ambient_dim()) throw ValidationError("restrict: box dimension mismatch");
    std::vector<Atom> kept;
    for (const Atom& a : v.atoms())
        if (box.contains_strict(a.x)) kept.push_back(a);
    if (kept.empty()) throw NumericError("empty restriction");
    return AtomicVarifold(v.ambient_dim(), v.dim(), std::move(kept), box);
}

AtomicVarifold sample_line(const Vec& a, const Vec& b, int count, std::optional<Box> domain) {
    if (a.size() != b.size()) throw ValidationError("sample_line: endpoint dimension mismatch");
    if (count < 2) throw ValidationError("sample_line: count must be >= 2");
    const Vec dir = subtract(b, a);
    const double length = norm(dir);
    if (!(length > 0.0)) throw ValidationError("sample_line: endpoints coincide");
    const Plane plane = Plane::from_basis({dir});
    const double mass = length / count;
    std::vector<Atom> atoms;
    atoms.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double t = (k + 0.5) / count;
        Vec x(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] + t * dir[i];
        atoms.push_back(Atom{std::move(x), plane, mass});
    }
    return AtomicVarifold(static_cast<int>(a.size()), 1, std::move(atoms), std::move(domain));
}

AtomicVarifold sample_circle(const Vec& center, double radius, int count, std::optional<Box> domain) {
    if (center.size() != 2) throw ValidationError("sample_circle: center must be in R^2");
    if (count < 3) throw ValidationError("sample_circle: count must be >= 3");
    if (!(radius > 0.0)) throw ValidationError("sample_circle: radius must be positive");
    const double mass = 2.0 * std::numbers::pi * radius / count;
    std::vector<Atom> atoms;
    atoms.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / count;
        const double c = std::cos(theta), s = std::sin(theta);
        atoms.push_back(Atom{Vec{center[0] + radius * c, center[1] + radius * s},
                             Plane::from_basis({Vec{-s, c}}), mass});
    }
    return AtomicVarifold(2, 1, std::move(atoms), std::move(domain));
}

AtomicVarifold sample_graph(const ScalarField& f, int d, int grid, std::optional<Box> domain) {
    if (d != 1 && d != 2) throw ValidationError("sample_graph: d must be 1 or 2");
    if (grid < 1) throw ValidationError("sample_graph: grid must be >= 1");
    const int n = d + 1;
    const double h = 1.0 / grid;
    const double cell_volume = std::pow(h, d);
    std::vector<Atom> atoms;
    const int cells = d == 1 ? grid : grid * grid;
    atoms.reserve(cells);
    for (int c = 0; c < cells; ++c) {
        Vec u(d);
        u[0] = ((c % grid) + 0.5) * h;
        if (d == 2) u[1] = ((c / grid) + 0.5) * h;
        Vec grad(d);
        for (int k = 0; k < d; ++k) {
            Vec up = u, down = u;
            up[k] += 0.5 * h;
            down[k] -= 0.5 * h;
            grad[k] = (f(up) - f(down)) / h;
        }
        double g2 = 0.0;
        std::vector<Vec> frame;
        for (int k = 0; k < d; ++k) {
            g2 += grad[k] * grad[k];
            Vec t(n, 0.0);
            t[k] = 1.0;
            t[d] = grad[k];
            frame.push_back(std::move(t));
        }
        // Gram determinant of the graph frame is 1 + |grad f|^2.
        const double mass = std::sqrt(1.0 + g2) * cell_volume;
        Vec x = u;
        x.push_back(f(u));
        atoms.push_back(Atom{std::move(x), Plane::from_basis(frame), mass});
    }
    return AtomicVarifold(n, d, std::move(atoms), std::move(domain));
}

AtomicVarifold sample_square_cloud(int side_count, int d, std::optional<Box> domain) {
    if (side_count < 1) throw ValidationError("sample_square_cloud: side_count must be >= 1");
    if (d != 1) throw ValidationError("sample_square_cloud: only d = 1 is meaningful in R^2");
    const double h = 1.0 / side_count;
    const Plane plane = Plane::axes(d, 2);
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(side_count) * side_count);
    for (int j = 0; j < side_count; ++j)
        for (int i = 0; i < side_count; ++i)
            atoms.push_back(Atom{Vec{(i + 0.5) * h, (j + 0.5) * h}, plane, h * h});
    return AtomicVarifold(2, d, std::move(atoms), std::move(domain));
}

}  // namespace gmt
