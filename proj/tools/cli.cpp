#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace enetfp::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands{"fit", "path", "select", "experiment", "demo2d"};
const std::set<std::string> kKinds{"consistency", "instability", "adaptive"};

// Strict reader over one JSON object: typed accessors, and finish() rejects
// keys nobody asked for.
class Reader {
public:
    Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return obj_.contains(key) && !obj_.at(key).is_null();
    }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key, 0.0);
    }

    std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw ConfigError(where_ + "." + key + ": expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_boolean()) throw ConfigError(where_ + "." + key + ": expected true or false");
        return v.get<bool>();
    }

    template <typename T>
    std::vector<T> list(const std::string& key, std::vector<T> fallback) {
        if (!has(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_array()) throw ConfigError(where_ + "." + key + ": expected an array");
        std::vector<T> out;
        for (const auto& item : v) {
            if (!item.is_number() || (std::is_integral_v<T> && !item.is_number_unsigned())) {
                throw ConfigError(where_ + "." + key + ": array entries have the wrong type");
            }
            out.push_back(item.get<T>());
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!used_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
        }
    }

private:
    const json& obj_;
    std::string where_;
    std::set<std::string> used_;
};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json coefficients_to_json(const Coefficients& beta) {
    json out = json::array();
    for (const auto& [id, v] : beta) out.push_back({{"level", id.level}, {"position", id.position}, {"value", v}});
    return out;
}

Coefficients coefficients_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ConfigError(where + ": expected an array of {level, position, value}");
    Coefficients out;
    for (const auto& item : arr) {
        Reader r(item, where + "[]");
        const auto level = static_cast<std::int32_t>(r.unsigned_int("level", 0));
        const auto position = static_cast<std::int64_t>(r.unsigned_int("position", 0));
        const double value = r.number("value", 0.0);
        r.finish();
        out[{level, position}] = value;
    }
    return out;
}

std::string noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::none: return "none";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::bounded_uniform: return "bounded_uniform";
    }
    return "none";
}

NoiseModel parse_noise(const json& doc, const std::string& where) {
    Reader r(doc, where);
    const std::string kind = r.string("kind", "none");
    NoiseModel noise;
    if (kind == "none") {
        noise.kind = NoiseKind::none;
    } else if (kind == "gaussian") {
        noise.kind = NoiseKind::gaussian;
    } else if (kind == "bounded_uniform") {
        noise.kind = NoiseKind::bounded_uniform;
    } else {
        throw ConfigError(where + ".kind: unknown noise kind '" + kind + "'");
    }
    noise.scale = r.number("scale", 0.0);
    r.finish();
    if (!(noise.scale >= 0.0)) throw ConfigError(where + ".scale must be >= 0");
    return noise;
}

DictionaryConfig parse_dictionary(const json& doc, const std::string& where) {
    Reader r(doc, where);
    DictionaryConfig d;
    d.type = r.string("type", "linear");
    if (d.type == "linear") {
        d.weights = r.list<double>("weights", {});
    } else if (d.type == "haar") {
        if (r.has("max_level")) d.max_level = static_cast<int>(r.unsigned_int("max_level", 0));
        d.smoothness = r.number("smoothness", 1.0);
        d.weight_exponent = r.number("weight_exponent", 0.0);
    } else if (d.type == "table") {
        d.features = r.string("features", "");
        d.weights_file = r.string("weights", "");
        if (d.features.empty()) throw ConfigError(where + ".features: required for a table dictionary");
    } else {
        throw ConfigError(where + ".type: unknown dictionary type '" + d.type + "' (linear, haar, table)");
    }
    r.finish();
    return d;
}

json emit_dictionary(const DictionaryConfig& d) {
    if (d.type == "haar") {
        return {{"type", "haar"},
                {"max_level", d.max_level ? json(*d.max_level) : json(nullptr)},
                {"smoothness", d.smoothness},
                {"weight_exponent", d.weight_exponent}};
    }
    if (d.type == "table") return {{"type", "table"}, {"features", d.features}, {"weights", d.weights_file}};
    return {{"type", d.type}, {"weights", d.weights}};
}

ExperimentConfig parse_experiment(const json& doc) {
    Reader r(doc, "experiment");
    ExperimentConfig e;
    e.kind = r.string("kind", "");
    if (!kKinds.count(e.kind)) {
        throw ConfigError("experiment.kind: unknown experiment kind '" + e.kind +
                          "' (consistency, instability, adaptive)");
    }
    e.problem = r.string("problem", e.problem);
    if (e.problem != "dependent-three" && e.problem != "haar") {
        throw ConfigError("experiment.problem: unknown problem '" + e.problem + "' (dependent-three, haar)");
    }
    if (r.has("haar")) e.haar = parse_dictionary(r.raw("haar"), "experiment.haar");
    e.haar.type = "haar";
    if (r.has("beta_star")) e.beta_star = coefficients_from_json(r.raw("beta_star"), "experiment.beta_star");
    if (r.has("noise")) e.noise = parse_noise(r.raw("noise"), "experiment.noise");
    e.seeds = r.list<std::uint64_t>("seeds", {});
    e.seed_count = r.unsigned_int("seed_count", e.seed_count);
    const std::vector<std::size_t> default_schedule =
        e.kind == "adaptive" ? std::vector<std::size_t>{1600} : std::vector<std::size_t>{100, 400, 1600, 6400};
    e.n_schedule = r.list<std::size_t>("n_schedule", default_schedule);
    e.rate = r.number("rate", e.rate);
    e.holdout_factor = r.unsigned_int("holdout_factor", e.holdout_factor);
    e.oracle_sample = r.unsigned_int("oracle_sample", e.oracle_sample);
    e.oracle_tolerance = r.number("oracle_tolerance", e.oracle_tolerance);
    e.n = r.unsigned_int("n", e.n);
    e.h = r.number("h", e.h);
    e.half_width = r.unsigned_int("half_width", e.half_width);
    e.thetas = r.list<double>("thetas", {});
    e.epsilons = r.list<double>("epsilons", e.epsilons);
    e.lambda = r.number("lambda", e.lambda);
    e.response_scale = r.number("response_scale", e.response_scale);
    e.lambda0 = r.optional_number("lambda0");
    e.grid_count = r.unsigned_int("grid_count", e.grid_count);
    r.finish();

    if (e.seeds.empty() && e.seed_count == 0) throw ConfigError("experiment: seed_count must be positive");
    if (e.problem == "haar" && e.beta_star.empty()) throw ConfigError("experiment.beta_star: required for haar");
    if (e.n_schedule.empty()) throw ConfigError("experiment.n_schedule: empty");
    if (e.n == 0) throw ConfigError("experiment.n: must be positive");
    if (e.grid_count == 0) throw ConfigError("experiment.grid_count: must be positive");
    return e;
}

json emit_experiment(const ExperimentConfig& e) {
    return {{"kind", e.kind},
            {"problem", e.problem},
            {"haar", emit_dictionary(e.haar)},
            {"beta_star", coefficients_to_json(e.beta_star)},
            {"noise", {{"kind", noise_kind_name(e.noise.kind)}, {"scale", e.noise.scale}}},
            {"seeds", e.seeds},
            {"seed_count", e.seed_count},
            {"n_schedule", e.n_schedule},
            {"rate", e.rate},
            {"holdout_factor", e.holdout_factor},
            {"oracle_sample", e.oracle_sample},
            {"oracle_tolerance", e.oracle_tolerance},
            {"n", e.n},
            {"h", e.h},
            {"half_width", e.half_width},
            {"thetas", e.thetas},
            {"epsilons", e.epsilons},
            {"lambda", e.lambda},
            {"response_scale", e.response_scale},
            {"lambda0", optional_json(e.lambda0)},
            {"grid_count", e.grid_count}};
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Dictionary> build_dictionary(const DictionaryConfig& d, std::size_t input_dim) {
    if (d.type == "table") {
        std::vector<double> weights;
        if (!d.weights_file.empty()) {
            const CsvTable table = read_csv(d.weights_file);
            for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
                for (Eigen::Index j = 0; j < table.values.cols(); ++j) weights.push_back(table.values(i, j));
            }
        }
        return linear_dictionary(input_dim, weights);
    }
    if (d.type == "haar") {
        if (input_dim != 1) throw DataError("haar dictionary needs exactly one input column");
        return std::make_shared<HaarDictionary>(WaveletSpec{d.max_level, d.smoothness, d.weight_exponent});
    }
    return linear_dictionary(input_dim, d.weights);
}

double resolve_kappa(const RunConfig& cfg, const Dictionary& dict, const Dataset& data) {
    if (cfg.kappa) return *cfg.kappa;
    return kappa_bound(dict, data.inputs);
}

SolverConfig solver_config(const RunConfig& cfg, double kappa) {
    SolverConfig s;
    s.epsilon = cfg.epsilon;
    s.lambda = cfg.lambda.value_or(1.0);
    s.kappa = kappa;
    s.kappa_minus = cfg.kappa_minus;
    s.target_accuracy = cfg.eta;
    s.max_iter = cfg.max_iter;
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + path + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + path + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw DataError("cannot move result into '" + path + "'");
}

std::string csv_path(const std::string& json_path) {
    const auto dot = json_path.find_last_of('.');
    const auto slash = json_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return json_path + ".csv";
    return json_path.substr(0, dot) + ".csv";
}

json solver_json(const SolverResult& r) { return json::parse(solver_result_json(r)); }

json document(const RunConfig& cfg, const char* key, json payload, double seconds) {
    return {{"command", cfg.command}, {"config", emit_run_config(cfg)}, {key, std::move(payload)},
            {"timing", {{"seconds", seconds}}}};
}

int run_fit(const RunConfig& cfg, const Dataset& data, const Dictionary& dict, std::ostream& log, bool verbose,
            double& elapsed, json& payload) {
    const auto start = std::chrono::steady_clock::now();
    const double kappa = resolve_kappa(cfg, dict, data);
    const FitResult fitted = fit(dict, data, solver_config(cfg, kappa), 0);
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    payload = solver_json(fitted.solver);
    payload["kappa"] = kappa;
    if (verbose) {
        log << "fit: " << fitted.solver.iterations << " iterations, kkt " << fitted.solver.kkt_residual
            << ", support " << fitted.solver.beta.size() << "/" << fitted.active_set.size() << "\n";
    }
    return fitted.solver.converged ? kOk : kNotConverged;
}

std::vector<PathPoint> compute_path(const RunConfig& cfg, const Dataset& data, const Dictionary& dict,
                                    const LambdaGrid& grid, double kappa) {
    PathConfig pc;
    pc.solver = solver_config(cfg, kappa);
    pc.warm_start = cfg.warm_start;
    return regularization_path(dict, data, grid, pc);
}

json path_json(const std::vector<PathPoint>& path) {
    json out = json::array();
    for (const auto& p : path) {
        out.push_back({{"lambda", p.lambda},
                       {"ok", p.ok},
                       {"error", p.error},
                       {"active_set_size", p.active_set_size},
                       {"result", solver_json(p.result)}});
    }
    return out;
}

BoundInputs bound_inputs(const RunConfig& cfg, double kappa, double n) {
    BoundInputs b;
    b.kappa = kappa;
    b.delta = cfg.delta;
    b.n = n;
    b.epsilon = cfg.epsilon;
    b.kappa_minus = cfg.kappa_minus;
    b.A = cfg.A;
    b.C_override = cfg.C;
    b.heuristic_C = cfg.heuristic_C;
    if (!cfg.C) {
        if (!cfg.A && !cfg.heuristic_C) {
            throw MissingConstantError("select: balancing constant unavailable; set \"C\" or \"A\" (or \"heuristic_C\")");
        }
        if (!cfg.sigma || !cfg.L) throw ConfigError("select: \"sigma\" and \"L\" are required unless \"C\" is given");
    }
    b.sigma = cfg.sigma.value_or(1.0);
    b.L = cfg.L.value_or(1.0);
    return b;
}

LambdaGrid grid_for(const RunConfig& cfg, double n) {
    LambdaGrid grid;
    grid.count = cfg.grid_count;
    if (cfg.grid_lambda0) {
        grid.lambda0 = *cfg.grid_lambda0;
    } else if (cfg.command == "select" && cfg.A) {
        grid.lambda0 = default_lambda0(*cfg.A, cfg.epsilon, n);
    } else {
        throw ConfigError(cfg.command + ": \"grid\".\"lambda0\" is required" +
                          (cfg.command == "select" ? " unless \"A\" is given" : ""));
    }
    grid.validate();
    return grid;
}

// A table dictionary replaces the dataset's inputs by the tabulated feature
// values; each column then acts as one coordinate feature.
Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.dictionary.type != "table") return read_dataset_csv(cfg.dataset);
    const CsvTable table = read_csv(cfg.dataset);
    const CsvTable features = read_csv(cfg.dictionary.features);
    std::vector<Eigen::Index> ys;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (table.header[j].rfind("y_", 0) == 0) ys.push_back(static_cast<Eigen::Index>(j));
    }
    if (ys.empty()) throw DataError(cfg.dataset + ": no y_ columns");
    if (features.values.rows() != table.values.rows()) {
        throw DataError(cfg.dictionary.features + ": " + std::to_string(features.values.rows()) +
                        " feature rows for " + std::to_string(table.values.rows()) + " samples");
    }
    Dataset data;
    data.inputs = features.values;
    data.outputs.resize(table.values.rows(), static_cast<Eigen::Index>(ys.size()));
    for (std::size_t k = 0; k < ys.size(); ++k) data.outputs.col(static_cast<Eigen::Index>(k)) = table.values.col(ys[k]);
    data.validate();
    return data;
}

SyntheticProblem build_problem(const ExperimentConfig& e) {
    if (e.problem == "haar") {
        return haar_problem(WaveletSpec{e.haar.max_level, e.haar.smoothness, e.haar.weight_exponent}, e.beta_star,
                            e.noise);
    }
    return dependent_three_problem(e.noise);
}

std::vector<std::uint64_t> seeds_for(const ExperimentConfig& e, std::uint64_t base) {
    if (!e.seeds.empty()) return e.seeds;
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < e.seed_count; ++i) out.push_back(base + i);
    return out;
}

ExperimentReport run_experiment(const RunConfig& cfg, const ExperimentConfig& e) {
    const auto seeds = seeds_for(e, cfg.seed);
    if (e.kind == "consistency") {
        ConsistencySpec s;
        s.problem = build_problem(e);
        s.n_schedule = e.n_schedule;
        s.rate = e.rate;
        s.seeds = seeds;
        s.epsilon = cfg.epsilon;
        s.eta = cfg.eta;
        s.max_iter = cfg.max_iter;
        s.holdout_factor = e.holdout_factor;
        s.oracle_sample = e.oracle_sample;
        s.oracle_tolerance = e.oracle_tolerance;
        return run_consistency(s);
    }
    if (e.kind == "instability") {
        InstabilitySpec s;
        s.n = e.n;
        s.h = e.h;
        s.half_width = e.half_width;
        s.thetas = e.thetas;
        s.epsilons = e.epsilons;
        s.lambda = e.lambda;
        s.response_scale = e.response_scale;
        s.noise = e.noise;
        s.seeds = seeds;
        s.eta = cfg.eta;
        s.max_iter = cfg.max_iter;
        return run_instability_demo(s);
    }
    AdaptiveSpec s;
    s.problem = build_problem(e);
    s.n_schedule = e.n_schedule;
    s.seeds = seeds;
    s.epsilon = cfg.epsilon;
    s.delta = cfg.delta;
    s.lambda0 = e.lambda0;
    s.grid_count = e.grid_count;
    s.eta = cfg.eta;
    s.max_iter = cfg.max_iter;
    s.oracle_sample = e.oracle_sample;
    s.oracle_tolerance = e.oracle_tolerance;
    return run_adaptive(s);
}

}  // namespace

// ---------------------------------------------------------------------------

RunConfig parse_run_config(const json& doc) {
    Reader r(doc, "config");
    RunConfig cfg;
    cfg.command = r.string("command", "");
    cfg.dataset = r.string("dataset", "");
    if (r.has("dictionary")) cfg.dictionary = parse_dictionary(r.raw("dictionary"), "dictionary");
    cfg.epsilon = r.number("epsilon", cfg.epsilon);
    cfg.lambda = r.optional_number("lambda");
    if (r.has("grid")) {
        Reader g(r.raw("grid"), "grid");
        cfg.grid_lambda0 = g.optional_number("lambda0");
        cfg.grid_count = g.unsigned_int("count", cfg.grid_count);
        g.finish();
    }
    cfg.eta = r.number("eta", cfg.eta);
    cfg.max_iter = r.unsigned_int("max_iter", cfg.max_iter);
    cfg.kappa = r.optional_number("kappa");
    cfg.kappa_minus = r.number("kappa_minus", cfg.kappa_minus);
    cfg.delta = r.number("delta", cfg.delta);
    cfg.C = r.optional_number("C");
    cfg.A = r.optional_number("A");
    cfg.heuristic_C = r.boolean("heuristic_C", cfg.heuristic_C);
    cfg.sigma = r.optional_number("sigma");
    cfg.L = r.optional_number("L");
    cfg.warm_start = r.boolean("warm_start", cfg.warm_start);
    cfg.seed = r.unsigned_int("seed", cfg.seed);
    cfg.output = r.string("output", "");
    if (r.has("experiment")) cfg.experiment = parse_experiment(r.raw("experiment"));
    r.finish();

    if (!cfg.command.empty() && !kCommands.count(cfg.command)) {
        throw ConfigError("command: unknown command '" + cfg.command + "' (fit, path, select, experiment, demo2d)");
    }
    if (!(cfg.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
    if (cfg.lambda && !(*cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(cfg.eta > 0.0)) throw ConfigError("eta must be positive");
    if (cfg.max_iter == 0) throw ConfigError("max_iter must be positive");
    if (cfg.kappa && !(*cfg.kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(cfg.delta > 0.0)) throw ConfigError("delta must be positive");
    if (cfg.grid_count == 0) throw ConfigError("grid.count must be >= 1");
    return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(doc);
}

json emit_run_config(const RunConfig& cfg) {
    return {{"command", cfg.command},
            {"dataset", cfg.dataset},
            {"dictionary", emit_dictionary(cfg.dictionary)},
            {"epsilon", cfg.epsilon},
            {"lambda", optional_json(cfg.lambda)},
            {"grid", {{"lambda0", optional_json(cfg.grid_lambda0)}, {"count", cfg.grid_count}}},
            {"eta", cfg.eta},
            {"max_iter", cfg.max_iter},
            {"kappa", optional_json(cfg.kappa)},
            {"kappa_minus", cfg.kappa_minus},
            {"delta", cfg.delta},
            {"C", optional_json(cfg.C)},
            {"A", optional_json(cfg.A)},
            {"heuristic_C", cfg.heuristic_C},
            {"sigma", optional_json(cfg.sigma)},
            {"L", optional_json(cfg.L)},
            {"warm_start", cfg.warm_start},
            {"seed", cfg.seed},
            {"output", cfg.output},
            {"experiment", cfg.experiment ? emit_experiment(*cfg.experiment) : json(nullptr)}};
}

int execute(const RunConfig& cfg, std::ostream& log, bool verbose) {
    if (!kCommands.count(cfg.command)) throw ConfigError("unknown command '" + cfg.command + "'");
    if (cfg.output.empty()) throw ConfigError("no output path (set \"output\" or pass --out)");

    if (cfg.command == "experiment" || cfg.command == "demo2d") {
        ExperimentConfig e;
        if (cfg.experiment) {
            e = *cfg.experiment;
        } else if (cfg.command == "experiment") {
            throw ConfigError("experiment: the \"experiment\" block is required");
        } else {
            e.kind = "instability";
            e.noise = {NoiseKind::gaussian, 0.1};
        }
        if (cfg.command == "demo2d" && e.kind != "instability") {
            throw ConfigError("demo2d runs the instability experiment; experiment.kind must be \"instability\"");
        }
        const auto start = std::chrono::steady_clock::now();
        const ExperimentReport report = run_experiment(cfg, e);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        RunConfig resolved = cfg;
        resolved.experiment = e;
        const json doc = document(resolved, "report", json::parse(experiment_report_json(report)), elapsed);
        write_file(cfg.output, doc.dump(2) + "\n");
        write_file(csv_path(cfg.output), experiment_report_csv(report));
        if (verbose) {
            log << cfg.command << ": " << report.cells.size() << " cells in " << elapsed << " s\n";
            for (const auto& w : report.warnings) log << "warning: " << w << "\n";
        }
        return kOk;
    }

    if (cfg.dataset.empty()) throw ConfigError(cfg.command + ": \"dataset\" is required");
    const Dataset data = load_dataset(cfg);
    const auto dict = build_dictionary(cfg.dictionary, data.input_dim());
    if (verbose) log << "loaded " << data.size() << " samples from " << cfg.dataset << "\n";

    if (cfg.command == "fit") {
        if (!cfg.lambda) throw ConfigError("fit: \"lambda\" is required");
        double elapsed = 0.0;
        json payload;
        const int code = run_fit(cfg, data, *dict, log, verbose, elapsed, payload);
        write_file(cfg.output, document(cfg, "result", payload, elapsed).dump(2) + "\n");
        return code;
    }

    const double n = static_cast<double>(data.size());
    std::optional<BoundInputs> bounds;
    const double kappa = resolve_kappa(cfg, *dict, data);
    if (cfg.command == "select") {
        bounds = bound_inputs(cfg, kappa, n);
        bounds->validate();
    }
    const LambdaGrid grid = grid_for(cfg, n);

    const auto start = std::chrono::steady_clock::now();
    const auto path = compute_path(cfg, data, *dict, grid, kappa);
    bool all_ok = true;
    for (const auto& p : path) all_ok = all_ok && p.ok;

    RunConfig resolved = cfg;
    resolved.grid_lambda0 = grid.lambda0;
    if (cfg.command == "path" || !all_ok) {
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json payload = {{"kappa", kappa}, {"points", path_json(path)}};
        write_file(cfg.output, document(resolved, "path", payload, elapsed).dump(2) + "\n");
        if (!all_ok && verbose) log << cfg.command << ": some grid points failed\n";
        return all_ok ? kOk : kNotConverged;
    }

    const SelectionReport report = balancing_select(path, *bounds, grid);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json payload = json::parse(selection_report_json(report));
    payload["kappa"] = kappa;
    write_file(cfg.output, document(resolved, "selection", payload, elapsed).dump(2) + "\n");
    if (verbose) log << "select: lambda+ = " << report.chosen_lambda << " (index " << report.chosen_index << ")\n";
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"enet: elastic-net regression by fixed-point iteration"};
    std::string command;
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    app.add_option("command", command, "fit | path | select | experiment | demo2d")->required();
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_path, "result file (overrides \"output\")");
    app.add_option("--seed", seed, "base seed (overrides \"seed\")");
    app.add_flag("--verbose", verbose, "progress on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) throw ConfigError("cannot open config '" + config_path + "'");
            std::ostringstream text;
            text << in.rdbuf();
            cfg = parse_run_config_text(text.str());
        }
        if (!kCommands.count(command)) throw ConfigError("unknown command '" + command + "'");
        if (!cfg.command.empty() && cfg.command != command) {
            throw ConfigError("command '" + command + "' does not match the config's \"command\": '" + cfg.command +
                              "'");
        }
        cfg.command = command;
        if (!out_path.empty()) cfg.output = out_path;
        if (seed) cfg.seed = *seed;
        const int code = execute(cfg, err, verbose);
        if (code == kNotConverged) err << "warning: not converged; result written with converged = false\n";
        return code;
    } catch (const MissingConstantError& e) {
        err << "error: " << e.what() << "\n";
        return kMissingConstant;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const Error& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    }
}

}  // namespace enetfp::cli
