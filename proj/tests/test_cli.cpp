#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latvib/cli.hpp"
#include "latvib/lattice.hpp"
#include "latvib/spec_io.hpp"

using namespace latvib;
namespace fs = std::filesystem;

namespace {

const std::string kCubicSpec = std::string(LATVIB_SOURCE_DIR) + "/lattices/cubic.spec";
const std::string kDiamondSpec =
    std::string(LATVIB_SOURCE_DIR) + "/lattices/diamond.spec";

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("shipped lattice files stay in sync with the builders") {
    const CrystalSpec cubic = load_crystal(kCubicSpec);
    const CrystalSpec ref = build_cubic(1.0, 1.0);
    CHECK(serialize_crystal(cubic) == serialize_crystal(ref));

    const CrystalSpec diamond = load_crystal(kDiamondSpec);
    const CrystalSpec dref = build_diamond(1.0, 1.0, 1.0);
    CHECK(serialize_crystal(diamond) == serialize_crystal(dref));
}

TEST_CASE("validate subcommand") {
    SECTION("every shipped spec is admissible") {
        for (const std::string& spec : {kCubicSpec, kDiamondSpec}) {
            const RunResult r = run_cli({"validate", spec});
            CHECK(r.code == 0);
            CHECK(r.out.find("admissible") != std::string::npos);
            CHECK(r.out.find("residual") != std::string::npos);
        }
    }
    SECTION("json report") {
        const RunResult r = run_cli({"validate", kCubicSpec, "--json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["admissible"] == true);
        CHECK(j["atoms"] == 1);
        CHECK(j["connectivity_certificate"] == true);
    }
    SECTION("inadmissible crystal exits 1 and names the failing invariant") {
        const std::array<Vec3, 3> basis = {Vec3{1, 1, 0}, Vec3{0, 1, 1},
                                           Vec3{1, 0, 1}};
        std::vector<BondDecl> bonds = {
            {"a", "b", {0, 0, 0}, 2.0 * Mat3::identity()},
            {"a", "b", {-1, 0, 0}, Mat3::identity()},
            {"a", "b", {0, -1, 0}, Mat3::identity()},
            {"a", "b", {0, 0, -1}, Mat3::identity()},
        };
        const CrystalSpec bad = make_crystal(
            "bad", basis, {{"a", {0, 0, 0}, 1.0}, {"b", {0.5, 0.5, 0.5}, 1.0}}, bonds);
        const std::string path = temp_path("latvib_bad.spec");
        write_text_atomic(path, serialize_crystal(bad));
        const RunResult r = run_cli({"validate", path});
        CHECK(r.code == 1);
        CHECK(r.out.find("inadmissible") != std::string::npos);
        fs::remove(path);
    }
    SECTION("unreadable and malformed files exit 1") {
        CHECK(run_cli({"validate", "/nonexistent/file.spec"}).code == 1);
        const std::string path = temp_path("latvib_malformed.spec");
        write_text_atomic(path, "{ this is not json");
        CHECK(run_cli({"validate", path}).code == 1);
        fs::remove(path);
    }
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({"frobnicate", "x"}).code == 2);
    CHECK(run_cli({"validate"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"dos", kCubicSpec, "--grid", "0"}).code == 2);
    CHECK(run_cli({"heat", kCubicSpec, "--tmin", "5", "--tmax", "1"}).code == 2);
    CHECK(run_cli({"bands", kCubicSpec, "--path", "0,0;1,0,0"}).code == 2);
    CHECK(run_cli({"bands", kCubicSpec, "--path", "0,0,zebra;1,0,0"}).code == 2);
}

TEST_CASE("c0 subcommand reports the quadrature value and the Lame fit") {
    const RunResult r = run_cli({"c0", kCubicSpec, "--sphere-order", "16", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["c0"].get<double>() - 0.050660591821168902) < 1e-10);
    CHECK(j["isotropic"] == true);
    CHECK(std::abs(j["c_l"].get<double>() - 1.0) < 1e-10);
    CHECK(std::abs(j["c0_isotropic"].get<double>() - j["c0"].get<double>()) < 1e-10);
    CHECK(j["a_positive"] == false);
}

TEST_CASE("debye subcommand") {
    const RunResult r = run_cli({"debye", kDiamondSpec, "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double c0 = 2.0 * std::sqrt(2.0) / (std::numbers::pi * std::numbers::pi);
    CHECK(std::abs(j["c0"].get<double>() - c0) < 1e-10);
    CHECK(std::abs(j["lambda_D"].get<double>() - std::pow(6.0 / c0, 2.0 / 3.0)) <
          1e-10);
}

TEST_CASE("oracle subcommand") {
    const RunResult r = run_cli({"oracle", kDiamondSpec, "--grid", "2", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["dimension"] == 48);
    CHECK(j["eigenvalue_discrepancy"].get<double>() < 1e-9);
    CHECK(j["trace_discrepancy"].get<double>() < 1e-10);
}

TEST_CASE("bands CSV output is deterministic and atomic") {
    const std::string p1 = temp_path("latvib_bands1.csv");
    const std::string p2 = temp_path("latvib_bands2.csv");
    const std::vector<std::string> args = {"bands",  kCubicSpec,
                                           "--path", "0,0,0;0.5,0,0;0.5,0.5,0",
                                           "--steps", "7"};
    auto with_output = [&](const std::string& p) {
        auto a = args;
        a.push_back("--output");
        a.push_back(p);
        return a;
    };
    REQUIRE(run_cli(with_output(p1)).code == 0);
    REQUIRE(run_cli(with_output(p2)).code == 0);
    const std::string text1 = slurp(p1);
    CHECK(text1 == slurp(p2));
    CHECK(text1.substr(0, text1.find('\n')) ==
          "segment,t,k1,k2,k3,lambda_1,lambda_2,lambda_3");
    // 1 header + 8 rows (first segment) + 7 rows (second, shared point skipped)
    CHECK(std::count(text1.begin(), text1.end(), '\n') == 16);
    CHECK(!fs::exists(p1 + ".tmp"));
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("dos CSV reaches the full mode count") {
    const RunResult r = run_cli({"dos", kDiamondSpec, "--grid", "3", "--points", "8"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "lambda,phi");
    std::string last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    CHECK(last.substr(last.find(',') + 1) == "6");
}

TEST_CASE("acoustic CSV lists unit directions with ascending speeds") {
    const RunResult r = run_cli({"acoustic", kCubicSpec});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "omega_x,omega_y,omega_z,s1,s2,s3");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream fields(line);
        std::string tok;
        std::vector<double> v;
        while (std::getline(fields, tok, ',')) v.push_back(std::stod(tok));
        REQUIRE(v.size() == 6);
        CHECK(std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0) < 1e-12);
        CHECK(v[3] <= v[4]);
        CHECK(v[4] <= v[5]);
        CHECK(std::abs(v[3] - 2.0 * std::numbers::pi) < 1e-10);
    }
    CHECK(rows == 50);
}

TEST_CASE("heat CSV saturates at the Dulong-Petit value") {
    const std::string path = temp_path("latvib_heat.csv");
    const RunResult r = run_cli({"heat", kCubicSpec, "--grid", "8", "--tmin", "0.01",
                                 "--tmax", "400", "--tsteps", "40", "--output", path});
    REQUIRE(r.code == 0);
    std::istringstream in(slurp(path));
    std::string line;
    std::getline(in, line);
    CHECK(line == "T,U1,C,C_debye,C_einstein");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string tok;
        std::vector<double> v;
        while (std::getline(fields, tok, ',')) v.push_back(std::stod(tok));
        REQUIRE(v.size() == 5);
        rows.push_back(v);
    }
    REQUIRE(rows.size() == 40);
    const auto& hot = rows.back();
    CHECK(std::abs(hot[2] / 3.0 - 1.0) < 5e-3);  // C
    CHECK(std::abs(hot[3] / 3.0 - 1.0) < 5e-3);  // C_debye
    CHECK(std::abs(hot[4] / 3.0 - 1.0) < 5e-3);  // C_einstein
    fs::remove(path);
}
