#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "enetfp/enetfp.hpp"

namespace enetfp::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kDataError = 3,
    kNotConverged = 4,
    kMissingConstant = 5,
};

struct DictionaryConfig {
    std::string type = "linear";  // "linear" | "haar" | "table"
    std::vector<double> weights;  // linear: one per input column (empty = all 1)
    std::string features;         // table: CSV of feature values, rows = samples
    std::string weights_file;     // table: CSV holding one weight per feature
    std::optional<int> max_level; // haar
    double smoothness = 1.0;      // haar
    double weight_exponent = 0.0; // haar
};

struct ExperimentConfig {
    std::string kind;  // "consistency" | "instability" | "adaptive"
    std::string problem = "dependent-three";  // or "haar"
    DictionaryConfig haar;                    // used when problem == "haar"
    Coefficients beta_star;                   // used when problem == "haar"
    NoiseModel noise{NoiseKind::gaussian, 0.5};
    std::vector<std::uint64_t> seeds;         // explicit; otherwise seed .. seed + seed_count - 1
    std::size_t seed_count = 5;
    std::vector<std::size_t> n_schedule;      // consistency / adaptive
    double rate = 1.0 / 3.0;
    std::size_t holdout_factor = 10;
    std::size_t oracle_sample = 4000;
    double oracle_tolerance = 1e-6;
    std::size_t n = 100;                      // instability
    double h = 0.01;
    std::size_t half_width = 5;
    std::vector<double> thetas;
    std::vector<double> epsilons{1.0, 1e-6};
    double lambda = 0.1;
    double response_scale = 2.0;
    std::optional<double> lambda0;            // adaptive
    std::size_t grid_count = 10;
};

/// Every run is driven by one of these; parse() validates it completely
/// before any computation starts.
struct RunConfig {
    std::string command;
    std::string dataset;
    DictionaryConfig dictionary;
    double epsilon = 1.0;
    std::optional<double> lambda;
    std::optional<double> grid_lambda0;
    std::size_t grid_count = 10;
    double eta = 1e-8;
    std::size_t max_iter = 1'000'000;
    std::optional<double> kappa;
    double kappa_minus = 0.0;
    double delta = 3.0;
    std::optional<double> C;
    std::optional<double> A;
    bool heuristic_C = false;
    std::optional<double> sigma;
    std::optional<double> L;
    bool warm_start = false;
    std::uint64_t seed = 0;
    std::string output;
    std::optional<ExperimentConfig> experiment;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig parse_run_config_text(const std::string& text);

/// Fully-resolved form: every field, defaults filled in.
nlohmann::json emit_run_config(const RunConfig& cfg);

/// Executes a parsed config and writes the result file(s). Returns the exit code.
int execute(const RunConfig& cfg, std::ostream& log, bool verbose);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace enetfp::cli
