#include "enetfp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "enetfp/errors.hpp"
#include "enetfp/parallel.hpp"
#include "enetfp/prox.hpp"
#include "enetfp/selection.hpp"
#include "enetfp/solver.hpp"

namespace enetfp {

namespace {

// Cell-stream tags for derive_seed.
constexpr std::uint64_t kHoldoutStream = 0x686f6c64ULL;
constexpr std::uint64_t kOracleDesignSeed = 0x64616767ULL;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string key(const std::string& name, const std::string& param, double value) {
    return name + "[" + param + "=" + fmt(value) + "]";
}

std::string describe(const Coefficients& beta) {
    std::ostringstream os;
    os << std::setprecision(17) << "{";
    bool first = true;
    for (const auto& [id, v] : beta) {
        os << (first ? "" : ", ") << to_string(id) << ": " << v;
        first = false;
    }
    os << "}";
    return os.str();
}

std::string describe(const NoiseModel& noise) {
    std::ostringstream os;
    os << std::setprecision(17) << static_cast<int>(noise.kind) << "/" << noise.scale;
    return os.str();
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const auto& v : values) os << v << ",";
    return os.str();
}

double prediction_error(const Dictionary& dict, const Coefficients& beta, const Coefficients& reference,
                        std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd x = uniform_inputs(count, dict.input_dim(), rng);
    Coefficients diff = beta;
    for (const auto& [id, v] : reference) diff[id] -= v;
    const Eigen::MatrixXd fitted = noiseless_outputs(dict, diff, x);
    return fitted.squaredNorm() / static_cast<double>(count);
}

}  // namespace

SyntheticProblem dependent_three_problem(const NoiseModel& noise) {
    std::vector<ExplicitFeature> features;
    features.push_back({[](std::span<const double>) { return Eigen::VectorXd::Constant(1, 1.0); }, 1.0, "1"});
    features.push_back({[](std::span<const double> x) { return Eigen::VectorXd::Constant(1, x[0]); }, 1.0, "x"});
    features.push_back(
        {[](std::span<const double> x) { return Eigen::VectorXd::Constant(1, 1.0 - x[0]); }, 1.0, "1-x"});
    SyntheticProblem problem;
    problem.name = "dependent-three";
    // On [0, 1]: 1 + x^2 + (1 - x)^2 <= 2.
    problem.dict = std::make_shared<ExplicitDictionary>(1, 1, std::move(features), 2.0);
    problem.beta_star = {{{0, 1}, 1.0}};
    problem.noise = noise;
    problem.kappa = 2.0;
    return problem;
}

SyntheticProblem haar_problem(const WaveletSpec& spec, Coefficients beta_star, const NoiseModel& noise) {
    SyntheticProblem problem;
    auto dict = std::make_shared<HaarDictionary>(spec);
    problem.name = "haar";
    problem.kappa = HaarDictionary::series_kappa(spec.smoothness);
    problem.dict = std::move(dict);
    problem.beta_star = std::move(beta_star);
    problem.noise = noise;
    return problem;
}

std::vector<double> InstabilitySpec::sweep() const {
    if (!thetas.empty()) return thetas;
    std::vector<double> out;
    const double centre = std::numbers::pi / 4.0;
    for (std::size_t k = half_width; k >= 1; --k) out.push_back(centre - static_cast<double>(k) * h);
    for (std::size_t k = 1; k <= half_width; ++k) out.push_back(centre + static_cast<double>(k) * h);
    return out;
}

Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) throw DataError("quartiles: empty sample");
    std::sort(values.begin(), values.end());
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw DataError("spearman: need two samples of equal length >= 2");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(ra.size());
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(rb.size());
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

std::string fingerprint(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Representation problem_representation(const SyntheticProblem& problem, double epsilon, std::size_t oracle_sample,
                                      double tolerance, std::size_t threads) {
    if (!problem.dict) throw ConfigError("synthetic problem without a dictionary");
    if (oracle_sample == 0) throw ConfigError("oracle sample size must be positive");
    std::mt19937_64 rng(derive_seed(kOracleDesignSeed, 0));
    const Eigen::MatrixXd design = uniform_inputs(oracle_sample, problem.dict->input_dim(), rng);
    RepresentationOptions options;
    options.epsilon = epsilon;
    options.kappa = problem.kappa;
    options.tolerance = tolerance;
    options.threads = threads;
    return enet_representation(*problem.dict, design, problem.beta_star, options);
}

// ---------------------------------------------------------------------------

ExperimentReport run_consistency(const ConsistencySpec& spec) {
    const auto& problem = spec.problem;
    if (!problem.dict) throw ConfigError("consistency: problem without a dictionary");
    if (!(spec.rate > 0.0 && spec.rate < 0.5)) throw ConfigError("consistency: rate must lie in (0, 1/2)");
    if (spec.n_schedule.empty() || spec.seeds.empty()) throw ConfigError("consistency: empty schedule or seed list");
    if (!(spec.epsilon > 0.0)) throw ConfigError("consistency: epsilon must be positive");

    ExperimentReport report;
    report.kind = "consistency";
    report.seeds = spec.seeds;

    Representation dagger;
    try {
        dagger = problem_representation(problem, spec.epsilon, spec.oracle_sample, spec.oracle_tolerance, spec.threads);
    } catch (const RepresentationError& e) {
        throw ConvergenceError(std::string("consistency: oracle beta_dagger failed: ") + e.what() +
                               "; last iterate " + describe(e.last()) + ", previous " + describe(e.previous()));
    }
    report.notes.push_back("beta_dagger = " + describe(dagger.beta));
    report.summary["beta_dagger_tolerance"] = dagger.achieved_tolerance;
    report.summary["beta_dagger_final_lambda"] = dagger.final_lambda;

    const std::size_t per_n = spec.seeds.size();
    report.cells.resize(spec.n_schedule.size() * per_n);
    parallel_for(
        report.cells.size(),
        [&](std::size_t idx) {
            const std::size_t n = spec.n_schedule[idx / per_n];
            const std::uint64_t seed = spec.seeds[idx % per_n];
            const double lambda = std::pow(static_cast<double>(n), -spec.rate);

            GeneratorSpec gen;
            gen.dict = problem.dict;
            gen.beta_star = problem.beta_star;
            gen.n = n;
            gen.noise = problem.noise;
            gen.seed = derive_seed(seed, n);
            const Dataset data = generate_dataset(gen);

            SolverConfig cfg;
            cfg.epsilon = spec.epsilon;
            cfg.lambda = lambda;
            cfg.kappa = problem.kappa;
            cfg.target_accuracy = spec.eta;
            cfg.max_iter = spec.max_iter;
            const FitResult fitted = fit(*problem.dict, data, cfg, 1);

            ExperimentCell& cell = report.cells[idx];
            cell.seed = seed;
            cell.params = {{"n", static_cast<double>(n)}, {"lambda", lambda}};
            cell.beta = fitted.solver.beta;
            cell.metrics["l2_error"] = l2_distance(cell.beta, dagger.beta);
            cell.metrics["prediction_error"] = prediction_error(*problem.dict, cell.beta, dagger.beta,
                                                                spec.holdout_factor * n,
                                                                derive_seed(gen.seed, kHoldoutStream));
            cell.metrics["iterations"] = static_cast<double>(fitted.solver.iterations);
            cell.metrics["kkt_residual"] = fitted.solver.kkt_residual;
            cell.metrics["converged"] = fitted.solver.converged ? 1.0 : 0.0;
            cell.metrics["support_size"] = static_cast<double>(cell.beta.size());
        },
        spec.threads);

    std::vector<double> log_n, medians;
    std::size_t failures = 0;
    for (std::size_t k = 0; k < spec.n_schedule.size(); ++k) {
        const double n = static_cast<double>(spec.n_schedule[k]);
        std::vector<double> errors, predictions;
        for (std::size_t s = 0; s < per_n; ++s) {
            const auto& cell = report.cells[k * per_n + s];
            errors.push_back(cell.metrics.at("l2_error"));
            predictions.push_back(cell.metrics.at("prediction_error"));
            if (cell.metrics.at("converged") == 0.0) ++failures;
        }
        const auto q = quartiles(errors);
        report.summary[key("median_l2_error", "n", n)] = q.median;
        report.summary[key("q1_l2_error", "n", n)] = q.q1;
        report.summary[key("q3_l2_error", "n", n)] = q.q3;
        report.summary[key("median_prediction_error", "n", n)] = quartiles(predictions).median;
        log_n.push_back(std::log(n));
        medians.push_back(q.median);
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < medians.size(); ++k) decreasing = decreasing && medians[k] < medians[k - 1];
    report.summary["strictly_decreasing"] = decreasing ? 1.0 : 0.0;
    report.summary["spearman_logn_median"] = medians.size() >= 2 ? spearman(log_n, medians) : 0.0;
    if (failures > 0) report.warnings.push_back(std::to_string(failures) + " cells did not converge");

    std::ostringstream cfg;
    cfg << std::setprecision(17) << "consistency|" << problem.name << "|" << describe(problem.beta_star) << "|"
        << describe(problem.noise) << "|" << problem.kappa << "|" << join(spec.n_schedule) << "|" << spec.rate << "|"
        << join(spec.seeds) << "|" << spec.epsilon << "|" << spec.eta << "|" << spec.max_iter << "|"
        << spec.holdout_factor << "|" << spec.oracle_sample << "|" << spec.oracle_tolerance;
    report.config_hash = fingerprint(cfg.str());
    return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_instability_demo(const InstabilitySpec& spec) {
    const auto thetas = spec.sweep();
    if (thetas.empty() || spec.epsilons.empty() || spec.seeds.empty()) {
        throw ConfigError("instability: empty theta sweep, epsilon list or seed list");
    }
    for (double e : spec.epsilons) {
        if (!(e > 0.0)) throw ConfigError("instability: epsilons must be positive");
    }

    ExperimentReport report;
    report.kind = "instability";
    report.seeds = spec.seeds;
    report.notes.push_back("near-Lasso runs use a small positive epsilon instead of 0");

    const std::size_t n_theta = thetas.size();
    const std::size_t n_eps = spec.epsilons.size();
    const std::size_t n_seed = spec.seeds.size();
    report.cells.resize(n_theta * n_eps * n_seed);
    // Cell order: theta-major, then epsilon, then seed.
    parallel_for(
        report.cells.size(),
        [&](std::size_t idx) {
            const double theta = thetas[idx / (n_eps * n_seed)];
            const double eps = spec.epsilons[(idx / n_seed) % n_eps];
            const std::uint64_t seed = spec.seeds[idx % n_seed];
            const auto design = collinear_design(spec.n, theta, spec.noise, seed, spec.response_scale);

            SolverConfig cfg;
            cfg.epsilon = eps;
            cfg.lambda = spec.lambda;
            cfg.kappa = *design.dict->analytic_kappa();
            cfg.target_accuracy = spec.eta;
            cfg.max_iter = spec.max_iter;
            const FitResult fitted = fit(*design.dict, design.data, cfg, 1);

            ExperimentCell& cell = report.cells[idx];
            cell.seed = seed;
            cell.params = {{"theta", theta}, {"epsilon", eps}, {"lambda", spec.lambda},
                           {"n", static_cast<double>(spec.n)}};
            cell.beta = fitted.solver.beta;
            const auto get = [&](std::int64_t pos) {
                const auto it = cell.beta.find({0, pos});
                return it == cell.beta.end() ? 0.0 : it->second;
            };
            cell.metrics["beta1"] = get(0);
            cell.metrics["beta2"] = get(1);
            cell.metrics["support_size"] = static_cast<double>(cell.beta.size());
            cell.metrics["two_nonzero"] = cell.beta.size() == 2 ? 1.0 : 0.0;
            cell.metrics["converged"] = fitted.solver.converged ? 1.0 : 0.0;
            cell.metrics["iterations"] = static_cast<double>(fitted.solver.iterations);
            cell.metrics["kkt_residual"] = fitted.solver.kkt_residual;
        },
        spec.threads);

    auto cell_at = [&](std::size_t t, std::size_t e, std::size_t s) -> const ExperimentCell& {
        return report.cells[(t * n_eps + e) * n_seed + s];
    };

    // Closest sweep points on either side of pi/4.
    const double centre = std::numbers::pi / 4.0;
    std::optional<std::size_t> below, above;
    for (std::size_t t = 0; t < n_theta; ++t) {
        if (thetas[t] < centre && (!below || thetas[t] > thetas[*below])) below = t;
        if (thetas[t] > centre && (!above || thetas[t] < thetas[*above])) above = t;
    }

    std::vector<std::vector<double>> deltas(n_eps);
    std::size_t failures = 0;
    for (std::size_t e = 0; e < n_eps; ++e) {
        const double eps = spec.epsilons[e];
        std::size_t two_cells = 0;
        std::size_t window_thetas = 0;
        for (std::size_t t = 0; t < n_theta; ++t) {
            std::size_t two = 0;
            for (std::size_t s = 0; s < n_seed; ++s) {
                two += cell_at(t, e, s).metrics.at("two_nonzero") != 0.0 ? 1 : 0;
                failures += cell_at(t, e, s).metrics.at("converged") == 0.0 ? 1 : 0;
            }
            two_cells += two;
            if (2 * two >= n_seed) ++window_thetas;
        }
        report.summary[key("two_nonzero_cells", "eps", eps)] = static_cast<double>(two_cells);
        report.summary[key("two_nonzero_thetas", "eps", eps)] = static_cast<double>(window_thetas);
        report.summary[key("window_exists", "eps", eps)] = window_thetas > 0 ? 1.0 : 0.0;
        if (below && above) {
            for (std::size_t s = 0; s < n_seed; ++s) {
                deltas[e].push_back(l2_distance(cell_at(*above, e, s).beta, cell_at(*below, e, s).beta));
            }
            report.summary[key("delta_median", "eps", eps)] = quartiles(deltas[e]).median;
        }
    }

    if (below && above && n_eps >= 2) {
        const auto lo = static_cast<std::size_t>(
            std::min_element(spec.epsilons.begin(), spec.epsilons.end()) - spec.epsilons.begin());
        const auto hi = static_cast<std::size_t>(
            std::max_element(spec.epsilons.begin(), spec.epsilons.end()) - spec.epsilons.begin());
        std::size_t contrast = 0;
        for (std::size_t s = 0; s < n_seed; ++s) {
            if (deltas[lo][s] >= 5.0 * deltas[hi][s]) ++contrast;
        }
        report.summary["contrast_fraction"] = static_cast<double>(contrast) / static_cast<double>(n_seed);
        report.summary["contrast_factor"] = 5.0;
        report.summary["delta_h"] = 0.5 * (thetas[*above] - thetas[*below]);
    } else {
        report.warnings.push_back("sweep does not straddle pi/4; Delta not computed");
    }
    if (failures > 0) report.warnings.push_back(std::to_string(failures) + " cells did not converge");

    std::ostringstream cfg;
    cfg << std::setprecision(17) << "instability|" << spec.n << "|" << join(thetas) << "|" << join(spec.epsilons)
        << "|" << spec.lambda << "|" << spec.response_scale << "|" << describe(spec.noise) << "|" << join(spec.seeds)
        << "|" << spec.eta << "|" << spec.max_iter;
    report.config_hash = fingerprint(cfg.str());
    return report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_adaptive(const AdaptiveSpec& spec) {
    const auto& problem = spec.problem;
    if (!problem.dict) throw ConfigError("adaptive: problem without a dictionary");
    if (spec.n_schedule.empty() || spec.seeds.empty()) throw ConfigError("adaptive: empty schedule or seed list");
    if (!(spec.epsilon > 0.0)) throw ConfigError("adaptive: epsilon must be positive");
    // W = 0 satisfies the moment condition for every positive pair; a negligible
    // one leaves C at its noiseless limit.
    const bool noiseless = problem.noise.kind == NoiseKind::none || problem.noise.scale == 0.0;
    const double sigma = noiseless ? 1e-12 : problem.noise.sigma();
    const double L = noiseless ? 1e-12 : problem.noise.L();

    ExperimentReport report;
    report.kind = "adaptive";
    report.seeds = spec.seeds;

    Representation dagger;
    try {
        dagger = problem_representation(problem, spec.epsilon, spec.oracle_sample, spec.oracle_tolerance, spec.threads);
    } catch (const RepresentationError& e) {
        throw ConvergenceError(std::string("adaptive: oracle beta_dagger failed: ") + e.what());
    }
    const double A = approximation_constant(dagger.beta, spec.epsilon, weights_of(*problem.dict));
    report.notes.push_back("beta_dagger = " + describe(dagger.beta));
    report.summary["A"] = A;

    const std::size_t per_n = spec.seeds.size();
    report.cells.resize(spec.n_schedule.size() * per_n);
    parallel_for(
        report.cells.size(),
        [&](std::size_t idx) {
            const std::size_t n = spec.n_schedule[idx / per_n];
            const std::uint64_t seed = spec.seeds[idx % per_n];

            GeneratorSpec gen;
            gen.dict = problem.dict;
            gen.beta_star = problem.beta_star;
            gen.n = n;
            gen.noise = problem.noise;
            gen.seed = derive_seed(seed, n);
            const Dataset data = generate_dataset(gen);

            LambdaGrid grid;
            grid.lambda0 = spec.lambda0.value_or(default_lambda0(A, spec.epsilon, static_cast<double>(n)));
            grid.count = spec.grid_count;

            PathConfig path_cfg;
            path_cfg.solver.epsilon = spec.epsilon;
            path_cfg.solver.kappa = problem.kappa;
            path_cfg.solver.target_accuracy = spec.eta;
            path_cfg.solver.max_iter = spec.max_iter;
            path_cfg.threads = 1;
            const auto path = regularization_path(*problem.dict, data, grid, path_cfg);

            BoundInputs bounds;
            bounds.kappa = problem.kappa;
            bounds.sigma = sigma;
            bounds.L = L;
            bounds.delta = spec.delta;
            bounds.n = static_cast<double>(n);
            bounds.epsilon = spec.epsilon;
            bounds.A = A;
            const SelectionReport sel = balancing_select(path, bounds, grid);

            double best = std::numeric_limits<double>::infinity();
            std::size_t best_index = 0;
            for (std::size_t k = 0; k < path.size(); ++k) {
                const double err = l2_distance(path[k].result.beta, dagger.beta);
                if (err < best) {
                    best = err;
                    best_index = k;
                }
            }
            const double chosen = l2_distance(sel.chosen_beta, dagger.beta);

            ExperimentCell& cell = report.cells[idx];
            cell.seed = seed;
            cell.params = {{"n", static_cast<double>(n)},
                           {"lambda0", grid.lambda0},
                           {"chosen_lambda", sel.chosen_lambda},
                           {"chosen_index", static_cast<double>(sel.chosen_index)}};
            cell.beta = sel.chosen_beta;
            cell.metrics["chosen_error"] = chosen;
            cell.metrics["min_grid_error"] = best;
            cell.metrics["best_index"] = static_cast<double>(best_index);
            cell.metrics["ratio"] = best > 0.0 ? chosen / best : (chosen == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
            cell.metrics["at_grid_top"] = sel.chosen_at_grid_top ? 1.0 : 0.0;
            cell.metrics["first_test_failed"] = sel.first_test_failed ? 1.0 : 0.0;
            cell.metrics["C"] = sel.C;
        },
        spec.threads);

    for (std::size_t k = 0; k < spec.n_schedule.size(); ++k) {
        const double n = static_cast<double>(spec.n_schedule[k]);
        std::vector<double> ratios, chosen_lambdas;
        std::size_t within = 0, edge = 0;
        for (std::size_t s = 0; s < per_n; ++s) {
            const auto& cell = report.cells[k * per_n + s];
            const double r = cell.metrics.at("ratio");
            ratios.push_back(r);
            chosen_lambdas.push_back(cell.params.at("chosen_lambda"));
            within += r <= 10.0 ? 1 : 0;
            edge += cell.metrics.at("at_grid_top") != 0.0 || cell.metrics.at("first_test_failed") != 0.0 ? 1 : 0;
        }
        report.summary[key("fraction_ratio_le_10", "n", n)] = static_cast<double>(within) / static_cast<double>(per_n);
        report.summary[key("median_ratio", "n", n)] = quartiles(ratios).median;
        report.summary[key("median_chosen_lambda", "n", n)] = quartiles(chosen_lambdas).median;
        report.summary[key("grid_edge_fraction", "n", n)] = static_cast<double>(edge) / static_cast<double>(per_n);
        if (edge > 0) {
            report.warnings.push_back("n=" + fmt(n) + ": " + std::to_string(edge) +
                                      " seeds chose a grid edge (grid does not bracket the balance point)");
        }
    }

    std::ostringstream cfg;
    cfg << std::setprecision(17) << "adaptive|" << problem.name << "|" << describe(problem.beta_star) << "|"
        << describe(problem.noise) << "|" << problem.kappa << "|" << join(spec.n_schedule) << "|" << join(spec.seeds)
        << "|" << spec.epsilon << "|" << spec.delta << "|" << (spec.lambda0 ? *spec.lambda0 : -1.0) << "|"
        << spec.grid_count << "|" << spec.eta << "|" << spec.max_iter << "|" << spec.oracle_sample << "|"
        << spec.oracle_tolerance;
    report.config_hash = fingerprint(cfg.str());
    return report;
}

}  // namespace enetfp
