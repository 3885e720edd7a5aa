#include "enetfp/selection.hpp"

#include <algorithm>
#include <cmath>

#include "enetfp/errors.hpp"
#include "enetfp/parallel.hpp"
#include "enetfp/prox.hpp"

namespace enetfp {

void LambdaGrid::validate() const {
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw ConfigError("lambda grid: lambda0 must be positive");
    if (count == 0) throw ConfigError("lambda grid: count must be >= 1");
    if (count > 200) throw ConfigError("lambda grid: count above 200");
}

std::vector<double> LambdaGrid::values() const {
    validate();
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lambda0 * std::exp2(static_cast<double>(i));
    return out;
}

namespace {

PathPoint solve_point(const Dictionary& dict, const Dataset& data, double lambda, const PathConfig& cfg,
                      const Coefficients* warm) {
    PathPoint point;
    point.lambda = lambda;
    try {
        SolverConfig solver_cfg = cfg.solver;
        solver_cfg.lambda = lambda;
        const auto active = compute_active_set(dict, data, lambda, solver_cfg.epsilon, 1);
        point.active_set_size = active.size();
        const auto ops = assemble_empirical(dict, data, active, 1);
        Coefficients start;
        if (warm) {
            for (const auto& [id, v] : *warm) {
                if (std::find(active.begin(), active.end(), id) != active.end()) start.emplace(id, v);
            }
        }
        point.result = solve(ops, solver_cfg, weights_of(dict), start);
        point.ok = point.result.converged;
        if (!point.ok) point.error = "solver did not converge";
    } catch (const Error& e) {
        point.ok = false;
        point.error = e.what();
    }
    return point;
}

}  // namespace

std::vector<PathPoint> regularization_path(const Dictionary& dict, const Dataset& data, const LambdaGrid& grid,
                                           const PathConfig& cfg) {
    const auto lambdas = grid.values();
    data.validate();
    std::vector<PathPoint> path(lambdas.size());
    if (cfg.warm_start) {
        // Largest lambda first: its solution is the sparsest starting point.
        for (std::size_t k = lambdas.size(); k-- > 0;) {
            const Coefficients* warm = k + 1 < lambdas.size() ? &path[k + 1].result.beta : nullptr;
            path[k] = solve_point(dict, data, lambdas[k], cfg, warm);
        }
    } else {
        parallel_for(
            lambdas.size(), [&](std::size_t k) { path[k] = solve_point(dict, data, lambdas[k], cfg, nullptr); },
            cfg.threads);
    }
    return path;
}

void BoundInputs::validate() const {
    if (!(kappa > 0.0)) throw ConfigError("bounds: kappa must be positive");
    if (!(sigma > 0.0)) throw ConfigError("bounds: sigma must be positive");
    if (!(L > 0.0)) throw ConfigError("bounds: L must be positive");
    if (!(n > 0.0)) throw ConfigError("bounds: n must be positive");
    if (!(delta > 0.0)) throw ConfigError("bounds: delta must be positive");
    if (delta > n) throw ConfigError("bounds: delta must not exceed n");
    if (!(epsilon >= 0.0)) throw ConfigError("bounds: epsilon must be >= 0");
    if (!(kappa_minus >= 0.0)) throw ConfigError("bounds: kappa_minus must be >= 0");
    if (A && !(*A >= 0.0)) throw ConfigError("bounds: A must be >= 0");
    if (C_override && !(*C_override > 0.0)) throw ConfigError("bounds: C must be positive");
}

double constant_c_kappa_sigma_l(double kappa, double sigma, double L) {
    return std::max(std::sqrt(2.0 * kappa) * (sigma + L), 3.0 * kappa);
}

BalancingConstant resolve_balancing_constant(const BoundInputs& in) {
    if (in.C_override) {
        if (!(*in.C_override > 0.0)) throw ConfigError("bounds: C must be positive");
        return {*in.C_override, "override"};
    }
    if (!in.A && !in.heuristic_C) {
        throw MissingConstantError("balancing constant unavailable: set C, or A, or enable the heuristic C");
    }
    in.validate();
    const double base = constant_c_kappa_sigma_l(in.kappa, in.sigma, in.L) * std::sqrt(in.delta);
    if (in.A) return {base * (1.0 + *in.A), "A"};
    return {base * 2.0, "heuristic"};
}

ScanResult balancing_scan(std::span<const double> differences, std::span<const double> thresholds) {
    if (differences.size() != thresholds.size()) throw DataError("balancing scan: size mismatch");
    if (differences.empty()) throw DataError("balancing scan: empty grid");
    ScanResult out;
    while (out.passed_prefix < differences.size() &&
           differences[out.passed_prefix] <= thresholds[out.passed_prefix]) {
        ++out.passed_prefix;
    }
    out.first_test_failed = out.passed_prefix == 0;
    out.chosen_index = out.passed_prefix == 0 ? 0 : out.passed_prefix - 1;
    return out;
}

SelectionReport balancing_select(const std::vector<PathPoint>& path, const BoundInputs& inputs,
                                 const LambdaGrid& grid) {
    const auto lambdas = grid.values();
    if (path.size() != lambdas.size()) throw ConfigError("balancing: path length does not match the grid");
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (!path[k].ok) {
            throw ConfigError("balancing: path point " + std::to_string(k) + " failed (" + path[k].error + ")");
        }
        if (std::abs(path[k].lambda - lambdas[k]) > 1e-12 * lambdas[k]) {
            throw ConfigError("balancing: path lambda " + std::to_string(k) + " does not match the grid");
        }
    }
    if (!(inputs.epsilon > 0.0)) throw ConfigError("balancing: epsilon must be positive");
    const BalancingConstant c = resolve_balancing_constant(inputs);
    if (!(inputs.n > 0.0)) throw ConfigError("balancing: n must be positive");

    SelectionReport report;
    report.grid = lambdas;
    report.C = c.value;
    report.C_source = c.source;
    const double root_n = std::sqrt(inputs.n);
    for (std::size_t j = 0; j < path.size(); ++j) {
        const std::size_t prev = j == 0 ? 0 : j - 1;
        report.support_sizes.push_back(path[j].result.beta.size());
        report.active_set_sizes.push_back(path[j].active_set_size);
        report.differences.push_back(l2_distance(path[j].result.beta, path[prev].result.beta));
        report.thresholds.push_back(4.0 * c.value / (root_n * inputs.epsilon * lambdas[prev]));
        report.passes.push_back(report.differences.back() <= report.thresholds.back());
    }
    const ScanResult scan = balancing_scan(report.differences, report.thresholds);
    report.chosen_index = scan.chosen_index;
    report.first_test_failed = scan.first_test_failed;
    report.chosen_lambda = lambdas[scan.chosen_index];
    report.chosen_beta = path[scan.chosen_index].result.beta;
    report.chosen_at_grid_top = scan.chosen_index + 1 == lambdas.size();
    return report;
}

std::pair<double, double> noise_and_gram_bounds(const BoundInputs& in) {
    in.validate();
    const double root_n = std::sqrt(in.n);
    return {std::sqrt(2.0 * in.kappa * in.delta) * (in.sigma + in.L) / root_n,
            3.0 * in.kappa * std::sqrt(in.delta) / root_n};
}

std::pair<double, double> noise_and_gram_bounds_full(const BoundInputs& in) {
    in.validate();
    const double root_n = std::sqrt(in.n);
    const double root_k = std::sqrt(in.kappa);
    const double tail = std::sqrt(2.0 * in.delta) / root_n;
    return {in.L * root_k * in.delta / in.n + in.sigma * root_k * tail, in.kappa * in.delta / in.n + in.kappa * tail};
}

double sample_error_bound(const BoundInputs& in, double lambda, double approx_error) {
    in.validate();
    if (in.epsilon == 0.0 && in.kappa_minus == 0.0) {
        throw ConfigError("sample error bound: needs epsilon > 0 or kappa_minus > 0");
    }
    if (!(lambda > 0.0)) throw ConfigError("sample error bound: lambda must be positive");
    if (!(approx_error >= 0.0)) throw ConfigError("sample error bound: approximation error must be >= 0");
    const double c = constant_c_kappa_sigma_l(in.kappa, in.sigma, in.L);
    return c * std::sqrt(in.delta) / (std::sqrt(in.n) * (in.kappa_minus + in.epsilon * lambda)) *
           (1.0 + approx_error);
}

double finite_dim_rate_bound(const BoundInputs& in, std::size_t n_star, double w_star, double beta_inf) {
    in.validate();
    if (!(in.kappa_minus > 0.0)) throw ConfigError("finite-dimensional rate: kappa_minus must be positive");
    if (!(w_star >= 0.0) || !(beta_inf >= 0.0)) throw ConfigError("finite-dimensional rate: w*, |beta|_inf >= 0");
    const double root_n = std::sqrt(in.n);
    const double c = constant_c_kappa_sigma_l(in.kappa, in.sigma, in.L);
    const double d = w_star / (2.0 * in.kappa_minus) + in.epsilon * beta_inf;
    const double bias = d * static_cast<double>(n_star) / root_n;
    return c * std::sqrt(in.delta) / (root_n * in.kappa_minus) * (1.0 + bias) + bias;
}

double universal_consistency_bound(const BoundInputs& in, double lambda, double D, double approx_prediction_error) {
    in.validate();
    if (!(lambda > 0.0)) throw ConfigError("consistency bound: lambda must be positive");
    if (!(D >= 0.0) || !(approx_prediction_error >= 0.0)) throw ConfigError("consistency bound: negative input");
    return std::sqrt(in.kappa) * in.delta * D / (std::sqrt(lambda) * in.n) +
           std::sqrt(2.0 * in.kappa * in.delta) * approx_prediction_error / std::sqrt(in.n);
}

double default_lambda0(double A, double epsilon, double n) {
    if (!(A > 0.0) || !(epsilon > 0.0) || !(n > 0.0)) throw ConfigError("default lambda0: A, eps, n must be positive");
    return 1.0 / (A * epsilon * std::sqrt(n));
}

double approximation_constant(const Coefficients& beta_dagger, double epsilon, const WeightFn& weights) {
    if (!(epsilon > 0.0)) throw ConfigError("approximation constant: epsilon must be positive");
    return l2_norm(beta_dagger) + penalty_value(beta_dagger, {epsilon, weights}) / std::sqrt(epsilon);
}

}  // namespace enetfp
