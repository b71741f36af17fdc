#include "gmt/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>
#include <vector>

namespace gmt::io {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

namespace {

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ValidationError("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

std::vector<double> numbers(std::string_view s) {
    std::vector<double> out;
    for (const auto& t : tokens(s)) out.push_back(parse_double(t));
    return out;
}

std::vector<double> csv_numbers(std::string_view s) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(parse_double(t));
    return out;
}

/// Header "magic v1 key=value ..." as a key map; throws on wrong magic.
std::map<std::string, std::string> parse_header(const std::string& line, std::string_view magic) {
    const auto toks = tokens(line);
    if (toks.size() < 2 || toks[0] != magic || toks[1] != "v1") {
        throw ValidationError("expected header '" + std::string(magic) + " v1 ...', got '" + line + "'");
    }
    std::map<std::string, std::string> kv;
    for (std::size_t i = 2; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos) throw ValidationError("malformed header field '" + toks[i] + "'");
        kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
    }
    return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("header is missing '" + key + "='");
    return it->second;
}

void write_basis(std::ostream& os, const Plane& p) {
    for (int k = 0; k < p.dim(); ++k) {
        if (k > 0) os << " ;";
        for (double b : p.basis_vector(k)) os << ' ' << format_double(b);
    }
}

/// "<lead> | <basis> | <mass>" split into its three fields.
struct Record {
    std::string lead;
    Plane plane;
    double mass;
};

Record parse_record(const std::string& line, int n, int d, std::size_t line_no) {
    const auto parts = split(line, '|');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (parts.size() != 3) throw ValidationError(where + "expected 'coords | basis | mass'");
    const auto rows = split(parts[1], ';');
    if (static_cast<int>(rows.size()) != d) throw ValidationError(where + "expected " + std::to_string(d) + " basis vectors");
    std::vector<Vec> basis;
    for (const auto& r : rows) {
        Vec b = numbers(r);
        if (static_cast<int>(b.size()) != n) throw ValidationError(where + "basis vector of wrong length");
        basis.push_back(std::move(b));
    }
    const auto m = numbers(parts[2]);
    if (m.size() != 1) throw ValidationError(where + "expected a single mass");
    try {
        return Record{parts[0], Plane::from_orthonormal(basis), m[0]};
    } catch (const NumericError& e) {
        throw ValidationError(where + e.what());
    }
}

}  // namespace

void write_atoms(std::ostream& os, const AtomicVarifold& v) {
    const int n = v.ambient_dim();
    os << "varifold-atoms v1 n=" << n << " d=" << v.dim() << " count=" << v.size() << " domain=";
    for (int i = 0; i < n; ++i) os << format_double(v.domain().lo[i]) << ',';
    for (int i = 0; i < n; ++i) os << format_double(v.domain().hi[i]) << (i + 1 < n ? "," : "");
    os << '\n';
    for (const Atom& a : v.atoms()) {
        for (int i = 0; i < n; ++i) os << (i ? " " : "") << format_double(a.x[i]);
        os << " |";
        write_basis(os, a.plane);
        os << " | " << format_double(a.mass) << '\n';
    }
}

AtomicVarifold read_atoms(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty varifold file");
    const auto kv = parse_header(line, "varifold-atoms");
    const int n = static_cast<int>(parse_int(require(kv, "n")));
    const int d = static_cast<int>(parse_int(require(kv, "d")));
    const auto count = parse_int(require(kv, "count"));
    if (n < 2 || d < 1 || d >= n) throw ValidationError("header: need 1 <= d < n");
    std::optional<Box> domain;
    if (auto it = kv.find("domain"); it != kv.end()) {
        const auto c = csv_numbers(it->second);
        if (static_cast<int>(c.size()) != 2 * n) throw ValidationError("header: domain needs 2n numbers");
        domain = Box{Vec(c.begin(), c.begin() + n), Vec(c.begin() + n, c.end())};
    }
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, count)));
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Record rec = parse_record(line, n, d, line_no);
        Vec x = numbers(rec.lead);
        if (static_cast<int>(x.size()) != n) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " coordinates");
        }
        atoms.push_back(Atom{std::move(x), std::move(rec.plane), rec.mass});
    }
    if (static_cast<std::int64_t>(atoms.size()) != count) {
        throw ValidationError("header count=" + std::to_string(count) + " but file has " +
                              std::to_string(atoms.size()) + " atoms");
    }
    return AtomicVarifold(n, d, std::move(atoms), std::move(domain));
}

void write_grid(std::ostream& os, const DiscreteVarifold& dv) {
    const CartesianGrid& g = dv.grid();
    const int n = g.dim();
    os << "varifold-grid v1 n=" << n << " d=" << dv.dim() << " h=" << format_double(g.h()) << " origin=";
    for (int i = 0; i < n; ++i) os << format_double(g.origin()[i]) << (i + 1 < n ? "," : "");
    os << " counts=";
    for (int i = 0; i < n; ++i) os << g.counts()[i] << (i + 1 < n ? "," : "");
    os << '\n';
    for (const auto& [flat, cell] : dv.cells()) {
        const MultiIndex idx = g.unflatten(flat);
        for (int i = 0; i < n; ++i) os << (i ? " " : "") << idx[i];
        os << " |";
        write_basis(os, cell.plane);
        os << " | " << format_double(cell.mass) << '\n';
    }
}

DiscreteVarifold read_grid(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty grid file");
    const auto kv = parse_header(line, "varifold-grid");
    const int n = static_cast<int>(parse_int(require(kv, "n")));
    const int d = static_cast<int>(parse_int(require(kv, "d")));
    const double h = parse_double(require(kv, "h"));
    const Vec origin = csv_numbers(require(kv, "origin"));
    std::vector<std::int64_t> counts;
    for (const auto& t : split(require(kv, "counts"), ',')) counts.push_back(parse_int(t));
    if (static_cast<int>(origin.size()) != n || static_cast<int>(counts.size()) != n) {
        throw ValidationError("header: origin and counts need n entries");
    }
    CartesianGrid grid(origin, h, counts);
    std::map<std::int64_t, Cell> cells;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Record rec = parse_record(line, n, d, line_no);
        MultiIndex idx;
        for (const auto& t : tokens(rec.lead)) idx.push_back(parse_int(t));
        if (static_cast<int>(idx.size()) != n) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " indices");
        }
        const auto flat = grid.flatten(idx);
        if (!cells.emplace(flat, Cell{rec.mass, std::move(rec.plane), false}).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate cell");
        }
    }
    return DiscreteVarifold(std::move(grid), d, std::move(cells));
}

FileKind detect_kind(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::string magic;
    in >> magic;
    if (magic == "varifold-atoms") return FileKind::atoms;
    if (magic == "varifold-grid") return FileKind::grid;
    throw ValidationError("'" + path.string() + "' is neither a varifold-atoms nor a varifold-grid file");
}

AtomicVarifold load_atoms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    try {
        return read_atoms(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

DiscreteVarifold load_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    try {
        return read_grid(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw ValidationError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ValidationError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

}  // namespace gmt::io
