#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gmt/io.hpp"
#include "vrect_cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "vrect");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = vrect::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return Result{code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kDiagonal = std::string(VRECT_FIXTURES) + "/diagonal_line.atoms";

struct TempDir {
    std::filesystem::path path;
    TempDir() : path(std::filesystem::temp_directory_path() / "vrect_cli_test") {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("schema and help") {
    const auto r = cli({"--schema"});
    CHECK(r.code == 0);
    for (const char* key : {"varifold-atoms v1", "varifold-grid v1", "CSV: firstvar", "CSV: energy", "CSV: tangent",
                            "CSV: regularity", "CSV: sweep"}) {
        CHECK(r.out.find(key) != std::string::npos);
    }
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"bogus"}).code == 2);
}

TEST_CASE("generate") {
    TempDir tmp;
    CHECK(cli({"generate", "--shape", "line", "--count", "10", "-o", tmp / "l"}).code == 0);
    CHECK(gmt::io::load_atoms(tmp / "l").size() == 10);
    CHECK(cli({"generate", "--shape", "circle", "--count", "100", "--radius", "2", "-o", tmp / "c"}).code == 0);
    CHECK(gmt::io::load_atoms(tmp / "c").total_mass() == doctest::Approx(4 * M_PI).epsilon(1e-12));
    CHECK(cli({"generate", "--shape", "graph", "--d", "2", "--count", "5", "--field", "sine", "-o", tmp / "g"}).code == 0);
    CHECK(gmt::io::load_atoms(tmp / "g").ambient_dim() == 3);
    CHECK(cli({"generate", "--shape", "square-cloud", "--count", "7", "-o", tmp / "s"}).code == 0);
    CHECK(gmt::io::load_atoms(tmp / "s").size() == 49);

    const auto bad = cli({"generate", "--shape", "torus"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("--shape") != std::string::npos);
    CHECK(cli({"generate", "--shape", "circle", "--radius", "-1"}).err.find("--radius") != std::string::npos);
    CHECK(cli({"generate", "--shape", "line", "--from", "0,a"}).code == 2);
}

TEST_CASE("shipped diagonal fixture") {
    const auto v = gmt::io::load_atoms(kDiagonal);
    CHECK(v.domain().lo == gmt::Vec{0, 0});
    CHECK(v.domain().hi == gmt::Vec{1, 1});
    CHECK(v.total_mass() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("firstvar totals row") {
    const auto r = cli({"firstvar", "-i", kDiagonal, "--h", "0.5"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    CHECK(rows.front().front() == "kind");
    CHECK(rows.back().front() == "total");
    CHECK(std::stod(rows.back().back()) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cli({"firstvar", "-i", kDiagonal}).code == 2);

    TempDir tmp;
    REQUIRE(cli({"discretize", "-i", kDiagonal, "--h", "0.5", "-o", tmp / "g"}).code == 0);
    CHECK(cli({"firstvar", "-i", tmp / "g"}).out == r.out);
}

TEST_CASE("energy") {
    const auto zero = cli({"energy", "-i", kDiagonal, "--alpha", "1.0"});
    REQUIRE(zero.code == 0);
    const auto rows = csv(zero.out);
    CHECK(rows.size() == 65);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][2]) == 0.0);

    const auto curve = cli({"energy", "-i", kDiagonal, "--alpha", "0.1,0.2,0.4", "--point", "0.5,0.5", "--plane", "0,1"});
    REQUIRE(curve.code == 0);
    const auto c = csv(curve.out);
    REQUIRE(c.size() == 4);
    CHECK(std::stod(c[1][2]) >= std::stod(c[2][2]));
    CHECK(std::stod(c[2][2]) >= std::stod(c[3][2]));

    const auto bad = cli({"energy", "-i", kDiagonal, "--alpha", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("--alpha") != std::string::npos);
    CHECK(cli({"energy", "-i", kDiagonal, "--point", "0.5"}).err.find("--point") != std::string::npos);
    CHECK(cli({"energy", "-i", kDiagonal, "--point", "0.5,0.5", "--plane", "1,1;1,0"}).code == 2);
}

TEST_CASE("tangent on the circle") {
    TempDir tmp;
    REQUIRE(cli({"generate", "--shape", "circle", "--count", "10000", "-o", tmp / "c"}).code == 0);
    const auto r = cli({"--threads", "2", "tangent", "-i", tmp / "c", "--alpha", "0.05"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 10001);
    const auto& header = rows.front();
    const auto col = std::find(header.begin(), header.end(), "angle_deg") - header.begin();
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, std::stod(rows[i][col]));
    CHECK(worst < 1.0);

    REQUIRE(cli({"generate", "--shape", "circle", "--count", "500", "--domain", "-3,-3,3,3", "-o", tmp / "wide"}).code == 0);
    const auto lonely = cli({"tangent", "-i", tmp / "wide", "--point", "1,0", "--point", "2.9,2.9"});
    REQUIRE(lonely.code == 0);
    const auto lr = csv(lonely.out);
    CHECK(lr[2].back().find("no local data") != std::string::npos);
}

TEST_CASE("determinism across runs and thread counts") {
    TempDir tmp;
    REQUIRE(cli({"generate", "--shape", "circle", "--count", "3000", "-o", tmp / "c"}).code == 0);
    const std::vector<std::string> sweep{"sweep", "-i", tmp / "c", "--h-list", "0.1,0.05", "--p", "0.2"};
    auto with_threads = [&](std::vector<std::string> args, const char* t) {
        args.insert(args.begin(), {"--threads", t});
        return cli(args).out;
    };
    const std::string one = with_threads(sweep, "1");
    CHECK(one == with_threads(sweep, "1"));
    CHECK(one == with_threads(sweep, "3"));
    const std::vector<std::string> energy{"energy", "-i", tmp / "c", "--alpha", "0.05,0.1"};
    CHECK(with_threads(energy, "1") == with_threads(energy, "4"));

    REQUIRE(cli({"discretize", "-i", tmp / "c", "--h", "0.05", "-o", tmp / "g1"}).code == 0);
    REQUIRE(cli({"discretize", "-i", tmp / "c", "--h", "0.05", "-o", tmp / "g2"}).code == 0);
    CHECK(slurp(tmp / "g1") == slurp(tmp / "g2"));
}

TEST_CASE("sweep") {
    SUBCASE("diagonal line lower bound") {
        const auto r = cli({"sweep", "-i", kDiagonal, "--h-list", "0.5,0.25,0.125,0.0625,0.03125,0.015625", "--p", "0.2"});
        REQUIRE(r.code == 0);
        const auto rows = csv(r.out);
        REQUIRE(rows.size() == 7);
        CHECK(rows[0][3] == "firstvar_total");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double h = std::stod(rows[i][1]);
            CHECK(std::stod(rows[i][3]) >= std::sqrt(2.0) / 2.0 * std::sqrt(2.0) / h - 1e-9);
        }
        CHECK(r.err.find("is decreasing") != std::string::npos);
    }
    SUBCASE("rule violation warns") {
        const auto r = cli({"sweep", "-i", kDiagonal, "--h-list", "0.25,0.125", "--p", "10"});
        CHECK(r.code == 0);
        CHECK(r.err.find("warning: delta^beta/alpha^(d+3) is nondecreasing") != std::string::npos);
    }
    SUBCASE("invalid configs name the field") {
        CHECK(cli({"sweep", "-i", kDiagonal, "--h-list", "0.1,0.2", "--p", "0.2"}).err.find("--h-list") !=
              std::string::npos);
        CHECK(cli({"sweep", "-i", kDiagonal, "--h-list", "0.1", "--p", "-1"}).err.find("--p") != std::string::npos);
        CHECK(cli({"sweep", "-i", kDiagonal, "--h-list", "0.1"}).code == 2);
    }
}

TEST_CASE("regularity") {
    TempDir tmp;
    REQUIRE(cli({"generate", "--shape", "circle", "--count", "20000", "-o", tmp / "c"}).code == 0);
    REQUIRE(cli({"discretize", "-i", tmp / "c", "--h", "0.1", "-o", tmp / "g1"}).code == 0);
    REQUIRE(cli({"discretize", "-i", tmp / "c", "--h", "0.05", "-o", tmp / "g2"}).code == 0);
    const auto r = cli({"regularity", "-i", tmp / "g1", "-i", tmp / "g2", "--p", "0.2", "--sample", "16",
                          "--report", tmp / "report.txt", "-o", tmp / "scales.csv"});
    REQUIRE(r.code == 0);
    CHECK(slurp(tmp / "report.txt").find("verdict:") != std::string::npos);
    const auto rows = csv(slurp(tmp / "scales.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"delta", "alpha", "beta_cut", "c1", "c2", "integrated_energy"});

    const auto atoms = cli({"regularity", "-i", tmp / "c", "--h-list", "0.1,0.05", "--alpha", "0.5,0.4", "--sample", "16"});
    CHECK(atoms.code == 0);
    CHECK(atoms.out.find("c1_hat") != std::string::npos);

    // beta_cut = 2h = 1 leaves no admissible density radius: a numerical failure
    const auto numeric = cli({"regularity", "-i", kDiagonal, "--h-list", "0.5", "--alpha", "0.5"});
    CHECK(numeric.code == 3);
    CHECK(cli({"regularity", "-i", tmp / "g1", "--alpha", "0.5,0.4"}).err.find("--alpha") != std::string::npos);
}
