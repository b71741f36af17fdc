#include "vrect_cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmt/energy.hpp"
#include "gmt/firstvar.hpp"
#include "gmt/gridding.hpp"
#include "gmt/io.hpp"
#include "gmt/parallel.hpp"
#include "gmt/regularity.hpp"
#include "gmt/tangent.hpp"
#include "gmt/varifold.hpp"

namespace vrect {

using gmt::NumericError;
using gmt::ValidationError;
using gmt::Vec;
using gmt::io::format_double;

namespace {

// ---------------------------------------------------------------------------
// Parsed command-line state. One struct per subcommand; all defaults live here.

struct Common {
    int threads = 1;
    std::string output;  // empty: write to the output stream
};

struct GenerateConfig {
    std::string shape;
    int count = 1000;
    std::string from = "0,0";
    std::string to = "1,1";
    std::string center = "0,0";
    double radius = 1.0;
    std::string field = "parabola";
    int d = 1;
    std::string domain;
};

struct InputConfig {
    std::string input;
    int q = gmt::kDefaultQuadrature;
};

struct DiscretizeConfig {
    InputConfig in;
    double h = 0.0;
};

struct FirstvarConfig {
    InputConfig in;
    double h = 0.0;
};

struct EnergyConfig {
    InputConfig in;
    std::vector<double> alphas{0.1};
    std::vector<std::string> points;
    std::vector<std::string> planes;
    std::string window;
};

struct TangentConfig {
    InputConfig in;
    double alpha = 0.1;
    std::vector<std::string> points;
    std::string window;
};

struct RegularityConfig {
    std::vector<std::string> inputs;
    int q = gmt::kDefaultQuadrature;
    std::vector<double> h_list;
    std::vector<double> alphas;
    std::optional<double> p;
    std::vector<double> beta_cuts;
    int sample = 64;
    int jones_points = 8;
    int jones_steps = 32;
    std::uint64_t seed = 1;
    double energy_fraction = 1.0;
    std::string report;
};

struct SweepConfig {
    InputConfig in;
    std::vector<double> h_list;
    double p = 0.0;
    double beta = 1.0;
    std::vector<double> beta_cuts;
    int sample = 64;
    std::uint64_t seed = 1;
    double energy_fraction = 1.0;
};

// ---------------------------------------------------------------------------
// Parsing helpers

Vec parse_vec(const std::string& text, const std::string& field) {
    Vec out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(',', start);
        const std::string tok = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        try {
            out.push_back(gmt::io::parse_double(tok));
        } catch (const ValidationError&) {
            throw ValidationError(field + ": '" + text + "' is not a comma-separated list of numbers");
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

Vec parse_point(const std::string& text, int n, const std::string& field) {
    Vec x = parse_vec(text, field);
    if (static_cast<int>(x.size()) != n) {
        throw ValidationError(field + ": '" + text + "' needs " + std::to_string(n) + " coordinates");
    }
    return x;
}

/// "b11,...,b1n;b21,...,b2n" -> plane spanned by the rows.
gmt::Plane parse_plane(const std::string& text, int n, int d, const std::string& field) {
    std::vector<Vec> rows;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(';', start);
        rows.push_back(parse_point(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start),
                                   n, field));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (static_cast<int>(rows.size()) != d) {
        throw ValidationError(field + ": '" + text + "' needs " + std::to_string(d) + " basis vectors");
    }
    try {
        return gmt::Plane::from_basis(rows);
    } catch (const NumericError& e) {
        throw ValidationError(field + ": " + e.what());
    }
}

gmt::Box parse_box(const std::string& text, int n, const std::string& field) {
    const Vec c = parse_vec(text, field);
    if (static_cast<int>(c.size()) != 2 * n) {
        throw ValidationError(field + ": needs " + std::to_string(2 * n) + " numbers (lo..., hi...)");
    }
    gmt::Box b{Vec(c.begin(), c.begin() + n), Vec(c.begin() + n, c.end())};
    for (int i = 0; i < n; ++i) {
        if (!(b.lo[i] < b.hi[i])) throw ValidationError(field + ": lo must be below hi on every axis");
    }
    return b;
}

void require_positive(double value, const std::string& field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError(field + ": must be a positive number, got " + format_double(value));
    }
}

void require_decreasing(const std::vector<double>& values, const std::string& field) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        require_positive(values[i], field);
        if (i > 0 && !(values[i] < values[i - 1])) {
            throw ValidationError(field + ": values must be strictly decreasing");
        }
    }
}

gmt::AtomicVarifold load_any(const InputConfig& in) {
    if (in.q < 1) throw ValidationError("--q: must be >= 1");
    if (gmt::io::detect_kind(in.input) == gmt::io::FileKind::grid) {
        return gmt::atomize(gmt::io::load_grid(in.input), in.q);
    }
    return gmt::io::load_atoms(in.input);
}

gmt::EnergyParams energy_params(double alpha, const std::string& window, const gmt::AtomicVarifold& v) {
    gmt::EnergyParams params;
    if (!window.empty()) {
        params = gmt::EnergyParams::local(alpha, parse_box(window, v.ambient_dim(), "--window"), v.domain());
    } else {
        params.alpha = alpha;
    }
    try {
        params.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("--alpha: ") + e.what());
    }
    return params;
}

/// Diameter of a grid cell of side h in R^n: the scale delta of a mesh.
double mesh_delta(double h, int n) { return h * std::sqrt(static_cast<double>(n)); }

void emit(const Common& common, const std::string& content, std::ostream& out) {
    if (common.output.empty()) {
        out << content;
    } else {
        gmt::io::write_file_atomic(common.output, content);
    }
}

// ---------------------------------------------------------------------------
// Commands

std::string cmd_generate(const GenerateConfig& c) {
    if (c.count < 1) throw ValidationError("--count: must be >= 1");
    std::optional<gmt::AtomicVarifold> v;
    auto domain_for = [&](int n) -> std::optional<gmt::Box> {
        if (c.domain.empty()) return std::nullopt;
        return parse_box(c.domain, n, "--domain");
    };
    if (c.shape == "line") {
        const Vec a = parse_vec(c.from, "--from");
        const Vec b = parse_vec(c.to, "--to");
        if (a.size() != b.size()) throw ValidationError("--from/--to: endpoints have different dimensions");
        v.emplace(gmt::sample_line(a, b, c.count, domain_for(static_cast<int>(a.size()))));
    } else if (c.shape == "circle") {
        require_positive(c.radius, "--radius");
        v.emplace(gmt::sample_circle(parse_point(c.center, 2, "--center"), c.radius, c.count, domain_for(2)));
    } else if (c.shape == "graph") {
        gmt::ScalarField f;
        if (c.field == "parabola") {
            f = [](std::span<const double> u) { return 0.5 * gmt::dot(u, u); };
        } else if (c.field == "sine") {
            f = [](std::span<const double> u) { return 0.25 * std::sin(2.0 * std::numbers::pi * u[0]); };
        } else {
            throw ValidationError("--field: unknown field '" + c.field + "' (parabola, sine)");
        }
        v.emplace(gmt::sample_graph(f, c.d, c.count, domain_for(c.d + 1)));
    } else if (c.shape == "square-cloud") {
        v.emplace(gmt::sample_square_cloud(c.count, c.d, domain_for(2)));
    } else {
        throw ValidationError("--shape: unknown shape '" + c.shape + "' (line, circle, graph, square-cloud)");
    }
    std::ostringstream os;
    gmt::io::write_atoms(os, *v);
    return os.str();
}

std::string cmd_discretize(const DiscretizeConfig& c) {
    require_positive(c.h, "--h");
    const gmt::AtomicVarifold v = load_any(c.in);
    const auto dv = gmt::discretize(v, gmt::CartesianGrid::covering(v.domain(), c.h));
    std::ostringstream os;
    gmt::io::write_grid(os, dv);
    return os.str();
}

std::string cmd_firstvar(const FirstvarConfig& c) {
    std::optional<gmt::DiscreteVarifold> dv;
    if (gmt::io::detect_kind(c.in.input) == gmt::io::FileKind::grid) {
        dv.emplace(gmt::io::load_grid(c.in.input));
    } else {
        require_positive(c.h, "--h");
        const gmt::AtomicVarifold v = gmt::io::load_atoms(c.in.input);
        dv.emplace(gmt::discretize(v, gmt::CartesianGrid::covering(v.domain(), c.h)));
    }
    const auto report = gmt::first_variation(*dv);
    std::ostringstream os;
    os << "kind,axis,cell,neighbor,density,area,contribution\n";
    for (const auto& t : report.terms) {
        os << (t.kind == gmt::FaceKind::internal ? "internal" : "boundary") << ',' << t.axis << ',' << t.cell
           << ',' << t.neighbor << ',' << format_double(t.density) << ',' << format_double(t.area) << ','
           << format_double(t.contribution) << '\n';
    }
    os << "internal_total,,,,,," << format_double(report.internal_total) << '\n';
    os << "boundary_total,,,,,," << format_double(report.boundary_total) << '\n';
    os << "total,,,,,," << format_double(report.total) << '\n';
    return os.str();
}

std::string cmd_energy(const EnergyConfig& c, int threads) {
    const gmt::AtomicVarifold v = load_any(c.in);
    const int n = v.ambient_dim(), d = v.dim();
    if (c.alphas.empty()) throw ValidationError("--alpha: at least one value required");
    std::vector<gmt::EnergyParams> params;
    for (double a : c.alphas) params.push_back(energy_params(a, c.window, v));

    std::vector<Vec> points;
    std::vector<gmt::Plane> planes;
    if (c.points.empty()) {
        if (!c.planes.empty()) throw ValidationError("--plane: requires --point");
        for (const gmt::Atom& a : v.atoms()) {
            points.push_back(a.x);
            planes.push_back(a.plane);
        }
    } else {
        for (const auto& s : c.points) points.push_back(parse_point(s, n, "--point"));
        if (c.planes.size() == 1) {
            planes.assign(points.size(), parse_plane(c.planes.front(), n, d, "--plane"));
        } else if (c.planes.size() == points.size()) {
            for (const auto& s : c.planes) planes.push_back(parse_plane(s, n, d, "--plane"));
        } else {
            throw ValidationError("--plane: give one plane, or one per --point");
        }
    }

    std::vector<Vec> values(points.size());
    gmt::parallel_for(points.size(), threads, [&](std::size_t i) {
        values[i].reserve(params.size());
        for (const auto& p : params) values[i].push_back(gmt::energy_alpha(points[i], planes[i], v, p).value);
    });
    std::ostringstream os;
    os << "point,alpha,value\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t a = 0; a < params.size(); ++a) {
            os << i << ',' << format_double(c.alphas[a]) << ',' << format_double(values[i][a]) << '\n';
        }
    }
    return os.str();
}

std::string cmd_tangent(const TangentConfig& c, int threads) {
    const gmt::AtomicVarifold v = load_any(c.in);
    const int n = v.ambient_dim(), d = v.dim();
    const gmt::EnergyParams params = energy_params(c.alpha, c.window, v);
    std::vector<Vec> points;
    const bool at_atoms = c.points.empty();
    if (at_atoms) {
        for (const gmt::Atom& a : v.atoms()) points.push_back(a.x);
    } else {
        for (const auto& s : c.points) points.push_back(parse_point(s, n, "--point"));
    }
    const auto field = gmt::tangent_field(points, v, params, threads);

    std::ostringstream os;
    os << "point";
    for (int i = 0; i < n; ++i) os << ",x" << i + 1;
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < n; ++i) os << ",b" << k + 1 << '_' << i + 1;
    os << ",energy,spectral_gap,degenerate,angle_deg,error\n";
    for (std::size_t p = 0; p < points.size(); ++p) {
        os << p;
        for (double x : points[p]) os << ',' << format_double(x);
        const auto& e = field[p];
        if (e.estimate) {
            const gmt::Plane& plane = e.estimate->plane;
            for (int k = 0; k < d; ++k)
                for (double b : plane.basis_vector(k)) os << ',' << format_double(b);
            os << ',' << format_double(e.estimate->energy) << ',' << format_double(e.estimate->spectral_gap) << ','
               << (e.estimate->degenerate ? 1 : 0) << ',';
            if (at_atoms) {
                os << format_double(gmt::principal_angle(plane, v.atom(p).plane) * 180.0 / std::numbers::pi);
            }
            os << ",\n";
        } else {
            for (int k = 0; k < d * n + 4; ++k) os << ',';
            // Errors are free text; quote and double embedded quotes.
            std::string msg = e.error;
            for (std::size_t at = 0; (at = msg.find('"', at)) != std::string::npos; at += 2) msg.insert(at, "\"");
            os << ",\"" << msg << "\"\n";
        }
    }
    return os.str();
}

std::string scales_csv(const gmt::RegularityReport& report, int n) {
    std::ostringstream os;
    os << "delta,alpha,beta_cut,c1,c2,integrated_energy\n";
    for (const auto& s : report.scales) {
        os << format_double(mesh_delta(s.h, n)) << ',' << format_double(s.alpha) << ',' << format_double(s.beta_cut)
           << ',' << format_double(s.c1) << ',' << format_double(s.c2) << ',' << format_double(s.integrated_energy)
           << '\n';
    }
    return os.str();
}

std::string cmd_regularity(const RegularityConfig& c, int threads, std::ostream& out, const std::string& csv_path) {
    if (c.inputs.empty()) throw ValidationError("--input: at least one file required");
    if (c.q < 1) throw ValidationError("--q: must be >= 1");
    std::vector<gmt::DiscreteVarifold> grids;
    if (!c.h_list.empty()) {
        if (c.inputs.size() != 1) throw ValidationError("--h-list: needs exactly one atomic --input");
        require_decreasing(c.h_list, "--h-list");
        const gmt::AtomicVarifold v = gmt::io::load_atoms(c.inputs.front());
        for (double h : c.h_list) grids.push_back(gmt::discretize(v, gmt::CartesianGrid::covering(v.domain(), h)));
    } else {
        for (const auto& path : c.inputs) {
            if (gmt::io::detect_kind(path) != gmt::io::FileKind::grid) {
                throw ValidationError("--input: '" + path + "' is atomic; pass --h-list to discretize it");
            }
            grids.push_back(gmt::io::load_grid(path));
        }
    }
    const std::size_t count = grids.size();
    if (c.p && !c.alphas.empty()) throw ValidationError("--alpha and --p are mutually exclusive");
    if (!c.p && c.alphas.size() != count) {
        throw ValidationError("--alpha: need one value per scale (" + std::to_string(count) + "), or use --p");
    }
    if (!c.beta_cuts.empty() && c.beta_cuts.size() != count) {
        throw ValidationError("--beta-cut: need one value per scale (" + std::to_string(count) + ")");
    }
    std::vector<gmt::ScaleInput> seq;
    for (std::size_t i = 0; i < count; ++i) {
        const double h = grids[i].grid().h();
        const double alpha = c.p ? std::pow(mesh_delta(h, grids[i].ambient_dim()), *c.p) : c.alphas[i];
        const double beta_cut = c.beta_cuts.empty() ? 2.0 * h : c.beta_cuts[i];
        require_positive(beta_cut, "--beta-cut");
        seq.push_back(gmt::ScaleInput{std::move(grids[i]), alpha, beta_cut});
    }
    gmt::ReportOptions options;
    options.sample = c.sample;
    options.jones_points = c.jones_points;
    options.jones_steps = c.jones_steps;
    options.seed = c.seed;
    options.energy_fraction = c.energy_fraction;
    options.threads = threads;
    const auto report = gmt::hypothesis_report(seq, c.q, options);
    const std::string text = gmt::format_report(report);
    if (c.report.empty()) {
        out << text;
    } else {
        gmt::io::write_file_atomic(c.report, text);
    }
    const std::string csv = scales_csv(report, seq.front().varifold.ambient_dim());
    // Without -o the CSV follows the text report on the output stream.
    return csv_path.empty() && c.report.empty() ? "\n" + csv : csv;
}

std::string cmd_sweep(const SweepConfig& c, int threads, std::ostream& err) {
    require_decreasing(c.h_list, "--h-list");
    if (c.h_list.empty()) throw ValidationError("--h-list: at least one value required");
    require_positive(c.p, "--p");
    if (!(c.beta > 0.0 && c.beta <= 1.0)) throw ValidationError("--beta: must lie in (0, 1]");
    if (!c.beta_cuts.empty() && c.beta_cuts.size() != c.h_list.size()) {
        throw ValidationError("--beta-cut: need one value per scale");
    }
    if (c.sample < 1) throw ValidationError("--sample: must be >= 1");
    if (c.in.q < 1) throw ValidationError("--q: must be >= 1");
    const gmt::AtomicVarifold v = gmt::io::load_atoms(c.in.input);
    const int n = v.ambient_dim(), d = v.dim();

    std::ostringstream os;
    os << "delta,h,alpha,firstvar_total,h_firstvar_total,integrated_energy,c1,c2\n";
    std::vector<double> rule;  // delta^beta / alpha^(d+3) per scale
    for (std::size_t i = 0; i < c.h_list.size(); ++i) {
        const double h = c.h_list[i];
        const double delta = mesh_delta(h, n);
        const double alpha = std::pow(delta, c.p);
        const double beta_cut = c.beta_cuts.empty() ? 2.0 * h : c.beta_cuts[i];
        const std::string where = "scale " + std::to_string(i) + " (h=" + format_double(h) + "): ";
        try {
            gmt::EnergyParams params;
            params.alpha = alpha;
            params.validate();
            const auto dv = gmt::discretize(v, gmt::CartesianGrid::covering(v.domain(), h));
            const double fv = gmt::first_variation(dv).total;
            const gmt::AtomicVarifold atoms = gmt::atomize(dv, c.in.q);
            const double energy =
                gmt::integrated_energy(atoms, atoms, params, {c.energy_fraction, c.seed, threads});
            std::string c1, c2;
            try {
                const auto ac = gmt::ahlfors_constants(atoms, beta_cut, c.sample, c.seed, threads);
                c1 = format_double(ac.c1);
                c2 = format_double(ac.c2);
            } catch (const NumericError& e) {
                err << "note: " << where << "density constants unavailable: " << e.what() << '\n';
            }
            os << format_double(delta) << ',' << format_double(h) << ',' << format_double(alpha) << ','
               << format_double(fv) << ',' << format_double(h * fv) << ',' << format_double(energy) << ',' << c1
               << ',' << c2 << '\n';
            rule.push_back(std::pow(delta, c.beta) / std::pow(alpha, d + 3.0));
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        } catch (const NumericError& e) {
            throw NumericError(where + e.what());
        }
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < rule.size(); ++i) decreasing = decreasing && rule[i] < rule[i - 1];
    const double p_max = c.beta / (d + 3.0);
    if (decreasing) {
        err << "scale rule: delta^beta/alpha^(d+3) is decreasing across the sweep (p=" << format_double(c.p)
            << " < beta/(d+3)=" << format_double(p_max) << ")\n";
    } else {
        err << "warning: delta^beta/alpha^(d+3) is nondecreasing across the sweep; choose p < beta/(d+3)="
            << format_double(p_max) << " (got p=" << format_double(c.p) << ")\n";
    }
    return os.str();
}

int default_threads() {
    if (const char* env = std::getenv("VARIFOLD_THREADS")) {
        try {
            const int t = std::stoi(env);
            if (t >= 1) return t;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

void add_input(CLI::App* sub, InputConfig& in) {
    sub->add_option("-i,--input", in.input, "input varifold file (atoms or grid)")->required();
    sub->add_option("--q", in.q, "quadrature nodes per axis when atomizing a grid file");
}

}  // namespace

const char* schema_text() {
    return R"(ATOMIC VARIFOLD FILE
  varifold-atoms v1 n=<n> d=<d> count=<N> [domain=<lo_1>,...,<lo_n>,<hi_1>,...,<hi_n>]
  x_1 ... x_n | b_11 ... b_1n ; ... ; b_d1 ... b_dn | m          (N lines)
  Basis rows are orthonormal. Floats use the shortest exact decimal form.
  Without domain=, the domain is the atoms' bounding box padded by 10% of its largest side.

DISCRETE VARIFOLD FILE
  varifold-grid v1 n=<n> d=<d> h=<h> origin=<o_1>,...,<o_n> counts=<c_1>,...,<c_n>
  i_1 ... i_n | b_11 ... b_1n ; ... ; b_d1 ... b_dn | m          (one line per nonzero cell)
  Cell i covers [origin + i*h, origin + (i+1)*h) per axis; m is the cell mass.

CSV: firstvar
  kind,axis,cell,neighbor,density,area,contribution
  kind: internal | boundary, one row per charged face; cell/neighbor are row-major
  flat indices (neighbor -1 never appears: hull faces are not charged).
  Trailing rows internal_total, boundary_total, total carry the sums in the last column.

CSV: energy
  point,alpha,value
  One row per (point, alpha). Points default to the atoms, each with its own plane.

CSV: tangent
  point,x_1..x_n,b1_1..bd_n,energy,spectral_gap,degenerate,angle_deg,error
  angle_deg: principal angle in degrees to the atom's plane (only when points are atoms).
  error: quoted message when the estimate failed; the numeric columns are then empty.

CSV: regularity
  delta,alpha,beta_cut,c1,c2,integrated_energy
  delta = h*sqrt(n). The text report lists c1_hat, c2_hat, Jones integrals and the verdict.

CSV: sweep
  delta,h,alpha,firstvar_total,h_firstvar_total,integrated_energy,c1,c2
  alpha = delta^p. c1,c2 are empty when no sampled center lies beta_cut inside the domain.
  stderr reports whether delta^beta/alpha^(d+3) decreases across the sweep.
)";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"vrect: rectifiability diagnostics for varifolds"};
    app.require_subcommand(0, 1);
    // "-h" stays free so that the cell side can be spelled --h.
    app.set_help_flag("--help", "print this help message and exit");
    Common common;
    common.threads = default_threads();
    bool schema = false;
    app.add_flag("--schema", schema, "print every file and CSV format, then exit");
    app.add_option("--threads", common.threads, "worker threads (default: $VARIFOLD_THREADS or 1)");

    GenerateConfig gen;
    auto* generate = app.add_subcommand("generate", "write a sampled varifold");
    generate->add_option("--shape", gen.shape, "line | circle | graph | square-cloud")->required();
    generate->add_option("--count", gen.count, "atoms (line, circle) or grid cells per axis (graph, square-cloud)");
    generate->add_option("--from", gen.from, "line start, comma separated");
    generate->add_option("--to", gen.to, "line end, comma separated");
    generate->add_option("--center", gen.center, "circle center");
    generate->add_option("--radius", gen.radius, "circle radius");
    generate->add_option("--field", gen.field, "graph function: parabola | sine");
    generate->add_option("--d", gen.d, "graph dimension (1 or 2), square-cloud plane dimension");
    generate->add_option("--domain", gen.domain, "lo_1,...,lo_n,hi_1,...,hi_n");

    DiscretizeConfig disc;
    auto* discretize = app.add_subcommand("discretize", "bin atoms into a cartesian grid");
    add_input(discretize, disc.in);
    discretize->add_option("--h", disc.h, "cell side")->required();

    FirstvarConfig fv;
    auto* firstvar = app.add_subcommand("firstvar", "face-by-face first variation of a discrete varifold");
    add_input(firstvar, fv.in);
    firstvar->add_option("--h", fv.h, "cell side (atomic input)");

    EnergyConfig en;
    auto* energy = app.add_subcommand("energy", "averaged height excess per point and alpha");
    add_input(energy, en.in);
    energy->add_option("--alpha", en.alphas, "comma-separated alphas")->delimiter(',');
    energy->add_option("--point", en.points, "evaluation point (repeatable)");
    energy->add_option("--plane", en.planes, "basis rows 'a,b;c,d' (one, or one per point)");
    energy->add_option("--window", en.window, "local variant on the box lo...,hi...");

    TangentConfig tg;
    auto* tangent = app.add_subcommand("tangent", "energy-minimizing tangent planes");
    add_input(tangent, tg.in);
    tangent->add_option("--alpha", tg.alpha, "lower scale");
    tangent->add_option("--point", tg.points, "evaluation point (repeatable; default: every atom)");
    tangent->add_option("--window", tg.window, "local variant on the box lo...,hi...");

    RegularityConfig rc;
    auto* regularity = app.add_subcommand("regularity", "density and energy hypotheses on a scale sequence");
    regularity->add_option("-i,--input", rc.inputs, "grid files in order of decreasing h, or one atom file")
        ->required();
    regularity->add_option("--q", rc.q, "quadrature nodes per axis");
    regularity->add_option("--h-list", rc.h_list, "cell sides for an atomic input")->delimiter(',');
    regularity->add_option("--alpha", rc.alphas, "one alpha per scale")->delimiter(',');
    regularity->add_option("--p", rc.p, "alpha rule: alpha = delta^p");
    regularity->add_option("--beta-cut", rc.beta_cuts, "one density cutoff per scale (default 2h)")->delimiter(',');
    regularity->add_option("--sample", rc.sample, "density centers per scale");
    regularity->add_option("--jones-points", rc.jones_points, "Jones integral points on the finest scale");
    regularity->add_option("--jones-steps", rc.jones_steps, "log-radius steps per Jones integral");
    regularity->add_option("--seed", rc.seed, "sampling seed");
    regularity->add_option("--energy-fraction", rc.energy_fraction, "share of atoms in the integrated energy");
    regularity->add_option("--report", rc.report, "write the text report here instead of the output stream");

    SweepConfig sw;
    auto* sweep = app.add_subcommand("sweep", "first variation against integrated energy across scales");
    add_input(sweep, sw.in);
    sweep->add_option("--h-list", sw.h_list, "decreasing cell sides")->delimiter(',')->required();
    sweep->add_option("--p", sw.p, "alpha rule exponent: alpha = delta^p")->required();
    sweep->add_option("--beta", sw.beta, "Holder exponent of the data");
    sweep->add_option("--beta-cut", sw.beta_cuts, "one density cutoff per scale (default 2h)")->delimiter(',');
    sweep->add_option("--sample", sw.sample, "density centers per scale");
    sweep->add_option("--seed", sw.seed, "sampling seed");
    sweep->add_option("--energy-fraction", sw.energy_fraction, "share of atoms in the integrated energy");

    for (auto* sub : {generate, discretize, firstvar, energy, tangent, regularity, sweep}) {
        sub->set_help_flag("--help", "print this help message and exit");
        sub->add_option("-o,--output", common.output, "output path (default: standard output)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (schema) {
            out << schema_text();
            return 0;
        }
        if (common.threads < 1) throw ValidationError("--threads: must be >= 1");
        if (*generate) {
            emit(common, cmd_generate(gen), out);
        } else if (*discretize) {
            emit(common, cmd_discretize(disc), out);
        } else if (*firstvar) {
            emit(common, cmd_firstvar(fv), out);
        } else if (*energy) {
            emit(common, cmd_energy(en, common.threads), out);
        } else if (*tangent) {
            emit(common, cmd_tangent(tg, common.threads), out);
        } else if (*regularity) {
            emit(common, cmd_regularity(rc, common.threads, out, common.output), out);
        } else if (*sweep) {
            emit(common, cmd_sweep(sw, common.threads, err), out);
        } else {
            out << app.help();
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace vrect
