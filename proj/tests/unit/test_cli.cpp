#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "enetfp/io.hpp"

using namespace enetfp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"enet"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::current_path() / "cli_scratch" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json without_timing(const fs::path& p) {
    json doc = json::parse(slurp(p));
    doc.erase("timing");
    return doc;
}

}  // namespace

TEST_CASE("fit on the ridge fixture") {
    const auto dir = scratch("ridge");
    write(dir / "data.csv", "x_1,y_1\n1,1\n");
    write(dir / "cfg.json", json{{"dataset", (dir / "data.csv").string()},
                                 {"dictionary", {{"type", "linear"}, {"weights", {0.0}}}},
                                 {"epsilon", 1.0},
                                 {"lambda", 1.0},
                                 {"eta", 1e-12},
                                 {"output", (dir / "out.json").string()}}
                                .dump());
    const auto r = run_cli({"fit", "--config", (dir / "cfg.json").string()});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(slurp(dir / "out.json"));
    CHECK(doc["command"] == "fit");
    CHECK(doc["result"]["converged"] == true);
    CHECK(doc["result"]["coefficients"][0]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(doc.contains("timing"));
}

TEST_CASE("table dictionary reads feature and weight files") {
    const auto dir = scratch("table");
    write(dir / "data.csv", "y_1\n2\n-2\n");
    write(dir / "features.csv", "f_1,f_2\n1,0\n-1,0.5\n");
    write(dir / "weights.csv", "w\n0\n0\n");
    write(dir / "cfg.json", json{{"dataset", (dir / "data.csv").string()},
                                 {"dictionary",
                                  {{"type", "table"},
                                   {"features", (dir / "features.csv").string()},
                                   {"weights", (dir / "weights.csv").string()}}},
                                 {"lambda", 0.01},
                                 {"eta", 1e-12},
                                 {"output", (dir / "out.json").string()}}
                                .dump());
    const auto r = run_cli({"fit", "--config", (dir / "cfg.json").string()});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(slurp(dir / "out.json"));
    CHECK(doc["config"]["dictionary"]["type"] == "table");
    CHECK(doc["result"]["coefficients"].size() == 2);
}

TEST_CASE("missing dataset exits 3 without output") {
    const auto dir = scratch("missing");
    write(dir / "cfg.json", json{{"dataset", (dir / "nope.csv").string()},
                                 {"lambda", 1.0},
                                 {"output", (dir / "out.json").string()}}
                                .dump());
    CHECK(run_cli({"fit", "--config", (dir / "cfg.json").string()}).code == 3);
    CHECK_FALSE(fs::exists(dir / "out.json"));
    CHECK_FALSE(fs::exists(dir / "out.json.tmp"));
}

TEST_CASE("config errors exit 2") {
    const auto dir = scratch("config");
    write(dir / "kind.json", R"({"experiment": {"kind": "bogus"}, "output": "x.json"})");
    const auto kind = run_cli({"experiment", "--config", (dir / "kind.json").string()});
    CHECK(kind.code == 2);
    CHECK(kind.err.find("bogus") != std::string::npos);
    write(dir / "unknown.json", R"({"lamda": 1.0})");
    const auto unknown = run_cli({"fit", "--config", (dir / "unknown.json").string()});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("lamda") != std::string::npos);
    CHECK(run_cli({"frobnicate"}).code == 2);
    write(dir / "type.json", R"({"epsilon": "one"})");
    CHECK(run_cli({"fit", "--config", (dir / "type.json").string()}).code == 2);
}

TEST_CASE("select without a constant exits 5") {
    const auto dir = scratch("select");
    write(dir / "data.csv", "x_1,y_1\n0.1,0.3\n0.5,0.2\n0.9,-0.4\n0.3,0.1\n");
    write(dir / "cfg.json", json{{"dataset", (dir / "data.csv").string()},
                                 {"grid", {{"lambda0", 0.1}, {"count", 3}}},
                                 {"sigma", 1.0},
                                 {"L", 1.0},
                                 {"output", (dir / "out.json").string()}}
                                .dump());
    const auto r = run_cli({"select", "--config", (dir / "cfg.json").string()});
    CHECK(r.code == 5);
    CHECK(r.err.find("A") != std::string::npos);
}

TEST_CASE("select reproduces the library choice") {
    const auto dir = scratch("select_ok");
    write(dir / "data.csv", "x_1,x_2,y_1\n0.1,0.7,0.3\n0.5,0.2,0.2\n0.9,0.4,-0.4\n0.3,0.8,0.1\n0.6,0.1,0.5\n");
    write(dir / "cfg.json", json{{"dataset", (dir / "data.csv").string()},
                                 {"grid", {{"lambda0", 0.001}, {"count", 8}}},
                                 {"C", 0.02},
                                 {"kappa", 2.0},
                                 {"eta", 1e-10},
                                 {"output", (dir / "out.json").string()}}
                                .dump());
    REQUIRE(run_cli({"select", "--config", (dir / "cfg.json").string()}).code == 0);
    const auto doc = json::parse(slurp(dir / "out.json"));

    const Dataset data = read_dataset_csv((dir / "data.csv").string());
    auto dict = linear_dictionary(2);
    PathConfig pc;
    pc.solver.epsilon = 1.0;
    pc.solver.kappa = 2.0;
    pc.solver.target_accuracy = 1e-10;
    const LambdaGrid grid{0.001, 8};
    BoundInputs in;
    in.kappa = 2.0;
    in.n = 5;
    in.C_override = 0.02;
    const auto report = balancing_select(regularization_path(*dict, data, grid, pc), in, grid);
    CHECK(doc["selection"]["chosen_lambda"].get<double>() == report.chosen_lambda);
    CHECK(doc["selection"]["chosen_index"].get<std::size_t>() == report.chosen_index);
}

TEST_CASE("config round trip") {
    const std::string text = R"({"command": "select", "dataset": "d.csv", "epsilon": 0.5, "lambda": 0.2,
        "grid": {"lambda0": 0.01, "count": 4}, "A": 2.0, "sigma": 1.0, "L": 0.5, "seed": 9, "output": "o.json",
        "dictionary": {"type": "haar", "max_level": 3, "smoothness": 1.0, "weight_exponent": 0.5}})";
    const auto cfg = cli::parse_run_config_text(text);
    const auto emitted = cli::emit_run_config(cfg);
    const auto again = cli::emit_run_config(cli::parse_run_config(emitted));
    CHECK(emitted == again);
    CHECK(emitted["dictionary"]["max_level"] == 3);
    CHECK(emitted["C"].is_null());

    const auto e1 = cli::emit_run_config(cli::parse_run_config_text(R"({"experiment": {"kind": "adaptive"}})"));
    CHECK(e1["experiment"]["n_schedule"] == nlohmann::json::array({1600}));
    CHECK(cli::emit_run_config(cli::parse_run_config(e1)) == e1);
}

TEST_CASE("reruns produce identical payloads") {
    const auto dir = scratch("rerun");
    write(dir / "cfg.json", json{{"experiment", {{"kind", "instability"}, {"seed_count", 2}, {"half_width", 2}}},
                                 {"seed", 4},
                                 {"output", (dir / "out.json").string()}}
                                .dump());
    std::vector<std::string> payloads, tables;
    for (int rep = 0; rep < 2; ++rep) {
        REQUIRE(run_cli({"experiment", "--config", (dir / "cfg.json").string()}).code == 0);
        payloads.push_back(without_timing(dir / "out.json").dump());
        tables.push_back(slurp(dir / "out.csv"));
    }
    CHECK(payloads[0] == payloads[1]);
    CHECK(tables[0] == tables[1]);
    CHECK_FALSE(tables[0].empty());
}
