#include <cmath>

#include "json.hpp"

#include "enetfp/io.hpp"

namespace enetfp {

namespace {

using nlohmann::json;

// JSON has no infinities; they are emitted as strings.
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json coefficients(const Coefficients& beta) {
    json out = json::array();
    for (const auto& [id, v] : beta) out.push_back({{"level", id.level}, {"position", id.position}, {"value", v}});
    return out;
}

json solver(const SolverResult& r) {
    return {{"coefficients", coefficients(r.beta)},
            {"iterations", r.iterations},
            {"a_priori_bound", number(r.a_priori_bound)},
            {"posterior_bound", number(r.posterior_bound)},
            {"kkt_residual", number(r.kkt_residual)},
            {"kkt_tolerance", number(r.kkt_tolerance)},
            {"contraction", number(r.contraction)},
            {"active_set_size", r.active_set_size},
            {"support_size", r.beta.size()},
            {"converged", r.converged}};
}

json doubles(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

json dump_map(const std::map<std::string, double>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[k] = number(v);
    return out;
}

}  // namespace

std::string coefficients_json(const Coefficients& beta) { return coefficients(beta).dump(2); }

std::string solver_result_json(const SolverResult& result) { return solver(result).dump(2); }

std::string selection_report_json(const SelectionReport& report) {
    json passes = json::array();
    for (bool b : report.passes) passes.push_back(b);
    const json out = {{"grid", doubles(report.grid)},
                      {"support_sizes", report.support_sizes},
                      {"active_set_sizes", report.active_set_sizes},
                      {"differences", doubles(report.differences)},
                      {"thresholds", doubles(report.thresholds)},
                      {"passes", passes},
                      {"chosen_index", report.chosen_index},
                      {"chosen_lambda", report.chosen_lambda},
                      {"chosen_coefficients", coefficients(report.chosen_beta)},
                      {"C", report.C},
                      {"C_source", report.C_source},
                      {"first_difference_is_self", report.first_difference_is_self},
                      {"first_test_failed", report.first_test_failed},
                      {"chosen_at_grid_top", report.chosen_at_grid_top}};
    return out.dump(2);
}

std::string experiment_report_json(const ExperimentReport& report) {
    json cells = json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"seed", c.seed},
                         {"params", dump_map(c.params)},
                         {"metrics", dump_map(c.metrics)},
                         {"coefficients", coefficients(c.beta)}});
    }
    const json out = {{"kind", report.kind},         {"cells", cells},
                      {"summary", dump_map(report.summary)}, {"warnings", report.warnings},
                      {"notes", report.notes},       {"seeds", report.seeds},
                      {"config_hash", report.config_hash}};
    return out.dump(2);
}

}  // namespace enetfp
