#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <sstream>

#include "intlab/cli.hpp"
#include "intlab/errors.hpp"

using namespace intlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("intlab-clitest-" + tag);
    std::error_code ec;
    fs::remove_all(p, ec);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

int call_main(std::vector<std::string> args) {
    args.insert(args.begin(), "intlab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("argument parsing") {
    const auto cfg = cli::config_from_args(
        {"triad", "--n", "1,2,3", "--a0", "1,1,1", "--t", "2", "--out", "/tmp/x", "--seed",
         "7", "--closed-form"});
    CHECK(cfg.subcommand == "triad");
    CHECK(cfg.params.at("n") == "1,2,3");
    CHECK(cfg.params.at("closed-form") == "true");
    CHECK(cfg.out_dir == fs::path("/tmp/x"));
    CHECK(cfg.seed == 7);

    CHECK_THROWS_AS(cli::config_from_args({}), ConfigError);
    CHECK_THROWS_AS(cli::config_from_args({"triad", "oops"}), ConfigError);
}

TEST_CASE("schema validation rejects unknown and missing keys") {
    cli::RunConfig cfg;
    cfg.subcommand = "heat";
    cfg.params = {{"bogus", "1"}};
    cfg.out_dir = fresh_dir("schema");
    CHECK_THROWS_AS(cli::dispatch(cfg), ConfigError);

    cli::RunConfig missing;
    missing.subcommand = "shock";  // x and t are required
    missing.out_dir = cfg.out_dir;
    CHECK_THROWS_AS(cli::dispatch(missing), ConfigError);

    cli::RunConfig unknown;
    unknown.subcommand = "frobnicate";
    CHECK_THROWS_AS(cli::dispatch(unknown), ConfigError);
}

TEST_CASE("triad run emits artifacts with small drift") {
    const auto out = fresh_dir("triad");
    cli::RunConfig cfg;
    cfg.subcommand = "triad";
    cfg.params = {{"n", "1,2,3"}, {"a0", "1,1,1"}, {"t", "2"}, {"closed-form", "true"}};
    cfg.out_dir = out;
    CHECK(cli::dispatch(cfg) == 0);
    const json rep = read_json(out / "triad.json");
    CHECK(rep["energy"] == 6.0);
    CHECK(rep["enstrophy"] == 14.0);
    CHECK(rep["invariant_drift"].get<double>() < 1e-9);
    CHECK(rep["schema_version"] == 1);
    const std::string csv = slurp(out / "triad.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "t,a1,a2,a3,energy,enstrophy");
}

TEST_CASE("seeded runs are byte-identical") {
    const auto a = fresh_dir("det-a");
    const auto b = fresh_dir("det-b");
    for (const auto& dir : {a, b}) {
        cli::RunConfig cfg;
        cfg.subcommand = "quartet";
        cfg.params = {{"couplings", "1,1,1,1"}, {"a0", "0.9,0.4,-0.6,0.8"}, {"t", "1"}};
        cfg.out_dir = dir;
        cfg.seed = 99;
        CHECK(cli::dispatch(cfg) == 0);
    }
    CHECK(slurp(a / "quartet.csv") == slurp(b / "quartet.csv"));
    CHECK(slurp(a / "quartet.json") == slurp(b / "quartet.json"));
    CHECK(!slurp(a / "quartet.csv").empty());
}

TEST_CASE("shock past the breaking time maps to a numerical failure") {
    const auto out = fresh_dir("shock");
    const int code = call_main({"shock", "--profile", "cubic", "--x", "0", "--t", "1",
                                "--out", out.string()});
    CHECK(code == 3);
    const json err = read_json(out / "error.json");
    CHECK(err["error"]["exit_code"] == 3);
    CHECK(err["error"]["roots"].size() == 3);

    const int ok = call_main({"shock", "--profile", "cubic", "--x", "0.5", "--t", "0.1",
                              "--out", out.string()});
    CHECK(ok == 0);
    CHECK(read_json(out / "shock.json")["residual"].get<double>() < 1e-12);
}

TEST_CASE("config errors exit 2 through the main wrapper") {
    CHECK(call_main({"frobnicate"}) == 2);
    CHECK(call_main({"heat", "--bogus", "1"}) == 2);
    CHECK(call_main({"--help"}) == 0);
}

TEST_CASE("json run configs drive the same dispatcher") {
    const auto out = fresh_dir("jsoncfg");
    const fs::path cfg_file = out / "run.json";
    {
        std::ofstream f(cfg_file);
        f << R"({"subcommand": "heat", "params": {"n": "64", "t": "1", "init": "sin"},)"
          << R"( "out": ")" << out.string() << R"(", "seed": 3})";
    }
    CHECK(call_main({"--config", cfg_file.string()}) == 0);
    const std::string csv = slurp(out / "heat.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "x,value");
    // 64 data rows plus header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
}

TEST_CASE("colehopf round trip through files") {
    const auto out = fresh_dir("ch");
    // write a positive periodic field w = 2 + cos x on [0, 2pi)
    {
        std::ofstream f(out / "w.csv");
        f.precision(17);
        f << "x,value\n";
        const int n = 64;
        for (int j = 0; j < n; ++j) {
            const double x = 2.0 * std::numbers::pi * j / n;
            f << x << "," << 2.0 + std::cos(x) << "\n";
        }
    }
    cli::RunConfig fwd;
    fwd.subcommand = "colehopf";
    fwd.params = {{"in", (out / "w.csv").string()}};
    fwd.out_dir = out;
    CHECK(cli::dispatch(fwd) == 0);
    const std::string u_csv = slurp(out / "colehopf.csv");
    CHECK(u_csv.substr(0, u_csv.find('\n')) == "x,value");

    // feed the u field back through the inverse direction
    fs::copy_file(out / "colehopf.csv", out / "u.csv");
    cli::RunConfig inv;
    inv.subcommand = "colehopf";
    inv.params = {{"in", (out / "u.csv").string()}, {"inverse", "true"}};
    inv.out_dir = out;
    CHECK(cli::dispatch(inv) == 0);
}

TEST_CASE("symmetry subcommand verdict") {
    const auto out = fresh_dir("sym");
    {
        std::ofstream f(out / "sys.json");
        f << R"({"components": {"x": "1", "y": "y1", "y1": "1"}})";
        std::ofstream g(out / "cand.json");
        g << R"({"components": {"x": "0", "y": "x", "y1": "1"}})";
    }
    cli::RunConfig cfg;
    cfg.subcommand = "symmetry";
    cfg.params = {{"system", (out / "sys.json").string()},
                  {"candidate", (out / "cand.json").string()}};
    cfg.out_dir = out;
    CHECK(cli::dispatch(cfg) == 0);
    const json rep = read_json(out / "symmetry.json");
    CHECK(rep["symmetry"] == true);
    CHECK(rep["trivial"] == false);
}

TEST_CASE("dispersion subcommand classifies the reference operators") {
    const auto out = fresh_dir("disp");
    cli::RunConfig cfg;
    cfg.subcommand = "dispersion";
    cfg.params = {{"poly", "ut - uxxx"}};
    cfg.out_dir = out;
    CHECK(cli::dispatch(cfg) == 0);
    CHECK(read_json(out / "dispersion.json")["dispersive"] == true);

    cfg.params["poly"] = "ut - 3*ux";
    CHECK(cli::dispatch(cfg) == 0);
    CHECK(read_json(out / "dispersion.json")["dispersive"] == false);
}

TEST_CASE("threebody lagrange preset") {
    const auto out = fresh_dir("tb");
    cli::RunConfig cfg;
    cfg.subcommand = "threebody";
    cfg.params = {{"law", "newton"}, {"coeff", "-1"}, {"preset", "lagrange"},
                  {"side", "1"}, {"T", "2"}};
    cfg.out_dir = out;
    CHECK(cli::dispatch(cfg) == 0);
    const json rep = read_json(out / "threebody.json");
    CHECK(std::abs(rep["final"]["com_velocity"][0].get<double>()) < 1e-12);
    const std::string csv = slurp(out / "threebody.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "t,x1,y1,x2,y2,x3,y3,energy,angmom,Z");
}

TEST_CASE("calogero subcommand") {
    const auto out = fresh_dir("cal");
    cli::RunConfig cfg;
    cfg.subcommand = "calogero";
    cfg.params = {{"x0", "-1,1"}, {"v0", "0,0"}, {"t", "5"}};
    cfg.out_dir = out;
    CHECK(cli::dispatch(cfg) == 0);
    const json rep = read_json(out / "calogero.json");
    CHECK(rep["ordering_preserved"] == true);
    CHECK(rep["energy_drift"].get<double>() < 1e-9);
}

TEST_CASE("environment thread cap is validated") {
    const auto out = fresh_dir("env");
    setenv("INTEGRABILITY_LAB_THREADS", "not-a-number", 1);
    cli::RunConfig cfg;
    cfg.subcommand = "heat";
    cfg.params = {{"n", "64"}};
    cfg.out_dir = out;
    CHECK_THROWS_AS(cli::dispatch(cfg), ConfigError);
    setenv("INTEGRABILITY_LAB_THREADS", "4", 1);
    CHECK(cli::dispatch(cfg) == 0);
    unsetenv("INTEGRABILITY_LAB_THREADS");
}
