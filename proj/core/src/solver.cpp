#include "enetfp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "enetfp/errors.hpp"
#include "enetfp/prox.hpp"

namespace enetfp {

void SolverConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("solver: lambda must be positive");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("solver: kappa must be positive");
    if (!(kappa_minus >= 0.0)) throw ConfigError("solver: kappa_minus must be >= 0");
    if (kappa_minus > kappa) throw ConfigError("solver: kappa_minus exceeds kappa");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("solver: epsilon must be >= 0");
    if (epsilon == 0.0 && kappa_minus == 0.0) {
        throw ConfigError("solver: epsilon = 0 needs kappa_minus > 0 for a contraction");
    }
    if (!(target_accuracy > 0.0)) throw ConfigError("solver: target accuracy must be positive");
    if (max_iter == 0) throw ConfigError("solver: max_iter must be positive");
    if (moment_bound && !(*moment_bound >= 0.0)) throw ConfigError("solver: moment bound must be >= 0");
}

double lipschitz_constant(double kappa, double kappa_minus, double epsilon, double lambda) {
    if (!(kappa > 0.0)) throw ConfigError("lipschitz constant: kappa must be positive");
    if (!(kappa_minus >= 0.0)) throw ConfigError("lipschitz constant: kappa_minus must be >= 0");
    if (kappa < kappa_minus) throw ConfigError("lipschitz constant: kappa < kappa_minus");
    if (!(epsilon >= 0.0) || !(lambda > 0.0)) throw ConfigError("lipschitz constant: need eps >= 0, lambda > 0");
    return (kappa - kappa_minus) / (kappa + kappa_minus + 2.0 * epsilon * lambda);
}

std::size_t a_priori_iteration_count(const SolverConfig& cfg, double moment_norm) {
    cfg.validate();
    const double q = lipschitz_constant(cfg.kappa, cfg.kappa_minus, cfg.epsilon, cfg.lambda);
    const double scale = moment_norm / (cfg.kappa_minus + cfg.epsilon * cfg.lambda);
    if (scale <= cfg.target_accuracy) return 0;
    if (q == 0.0) return 1;
    return static_cast<std::size_t>(std::ceil(std::log(scale / cfg.target_accuracy) / std::log(1.0 / q)));
}

bool passes_truncation_test(double weight, double feature_norm, double y_norm, double lambda, double epsilon) {
    if (feature_norm == 0.0) return false;
    return weight <= 2.0 * y_norm * (feature_norm + std::sqrt(epsilon * lambda)) / lambda;
}

std::vector<FeatureId> compute_active_set(const Dictionary& dict, const Dataset& data, double lambda,
                                          double epsilon, std::size_t threads) {
    if (!(lambda > 0.0)) throw ConfigError("active set: lambda must be positive");
    if (!(epsilon >= 0.0)) throw ConfigError("active set: epsilon must be >= 0");
    data.validate();

    double ysq = 0.0;
    for (Eigen::Index i = 0; i < data.outputs.rows(); ++i) ysq += data.outputs.row(i).squaredNorm();
    const double y_norm = std::sqrt(ysq / static_cast<double>(data.size()));

    const auto candidates = dict.truncation_candidates(2.0 * y_norm / lambda, std::sqrt(epsilon * lambda));
    const auto design = sample_features(dict, data, candidates, threads);
    const Eigen::VectorXd norms = design.empirical_norms();

    std::vector<FeatureId> active;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (passes_truncation_test(dict.weight(candidates[c]), norms(static_cast<Eigen::Index>(c)), y_norm, lambda,
                                   epsilon)) {
            active.push_back(candidates[c]);
        }
    }
    return active;
}

Eigen::VectorXd weight_vector(const EmpiricalOperators& ops, const WeightFn& weights) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(ops.size()));
    for (std::size_t c = 0; c < ops.size(); ++c) {
        const double wc = weights(ops.index_set[c]);
        if (!(wc >= 0.0)) throw ConfigError("negative weight for feature " + to_string(ops.index_set[c]));
        w(static_cast<Eigen::Index>(c)) = wc;
    }
    return w;
}

Eigen::VectorXd fixed_point_step(const EmpiricalOperators& ops, const Eigen::VectorXd& beta, const SolverConfig& cfg,
                                 const Eigen::VectorXd& weights) {
    if (beta.size() != static_cast<Eigen::Index>(ops.size()) || weights.size() != beta.size()) {
        throw DataError("fixed point step: dimension mismatch");
    }
    const double tau = cfg.tau();
    const Eigen::VectorXd v = tau * beta - ops.gram * beta + ops.moment;
    return soft_threshold_dense(v, cfg.lambda, weights) / (tau + cfg.epsilon * cfg.lambda);
}

Coefficients fixed_point_step(const EmpiricalOperators& ops, const Coefficients& beta, const SolverConfig& cfg,
                              const WeightFn& weights) {
    cfg.validate();
    const Eigen::VectorXd dense = to_dense(beta, ops.index_set);
    return from_dense(fixed_point_step(ops, dense, cfg, weight_vector(ops, weights)), ops.index_set);
}

double kkt_residual(const EmpiricalOperators& ops, const Eigen::VectorXd& beta, const SolverConfig& cfg,
                    const Eigen::VectorXd& weights) {
    if (beta.size() != static_cast<Eigen::Index>(ops.size())) throw DataError("kkt residual: dimension mismatch");
    const double el = cfg.epsilon * cfg.lambda;
    const Eigen::VectorXd r = ops.moment - ops.gram * beta - el * beta;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < beta.size(); ++c) {
        const double half = 0.5 * cfg.lambda * weights(c);
        double violation = 0.0;
        if (beta(c) > 0.0) {
            violation = std::abs(r(c) - half);
        } else if (beta(c) < 0.0) {
            violation = std::abs(r(c) + half);
        } else {
            violation = std::max(0.0, std::abs(r(c)) - half);
        }
        worst = std::max(worst, violation);
    }
    return worst;
}

double kkt_residual(const EmpiricalOperators& ops, const Coefficients& beta, const SolverConfig& cfg,
                    const WeightFn& weights) {
    return kkt_residual(ops, to_dense(beta, ops.index_set), cfg, weight_vector(ops, weights));
}

double certification_tolerance(const SolverConfig& cfg) {
    return std::max(1e-8, 10.0 * cfg.target_accuracy * (cfg.kappa + cfg.epsilon * cfg.lambda));
}

SolverResult solve(const EmpiricalOperators& ops, const SolverConfig& cfg, const WeightFn& weights,
                   const Coefficients& start, const IterationObserver& observer) {
    cfg.validate();
    if (ops.trace > cfg.kappa * (1.0 + 1e-9)) {
        throw ConfigError("solver: kappa = " + std::to_string(cfg.kappa) + " is below the Gram trace " +
                          std::to_string(ops.trace));
    }
    const Eigen::VectorXd w = weight_vector(ops, weights);
    const double q = lipschitz_constant(cfg.kappa, cfg.kappa_minus, cfg.epsilon, cfg.lambda);
    const double ratio = q / (1.0 - q);
    const double moment_norm = cfg.moment_bound.value_or(ops.moment.norm());
    const double strong = cfg.kappa_minus + cfg.epsilon * cfg.lambda;

    SolverResult result;
    result.contraction = q;
    result.active_set_size = ops.size();
    result.kkt_tolerance = certification_tolerance(cfg);

    Eigen::VectorXd beta = to_dense(start, ops.index_set);
    if (observer) observer(0, beta);

    double first_step = 0.0;
    double q_power = 1.0;
    bool stopped = ops.size() == 0;
    std::size_t l = 0;
    while (!stopped && l < cfg.max_iter) {
        Eigen::VectorXd next = fixed_point_step(ops, beta, cfg, w);
        const double step = (next - beta).norm();
        beta.swap(next);
        ++l;
        q_power *= q;
        if (observer) observer(l, beta);
        if (l == 1) first_step = step;

        const double prior = q_power / (1.0 - q) * first_step;
        result.posterior_bound = ratio * step;
        stopped = prior <= cfg.target_accuracy || result.posterior_bound <= cfg.target_accuracy;
    }

    result.iterations = l;
    result.a_priori_bound =
        start.empty() ? q_power * moment_norm / strong : q_power / (1.0 - q) * first_step;
    result.kkt_residual = kkt_residual(ops, beta, cfg, w);
    result.converged = stopped && result.kkt_residual <= result.kkt_tolerance;
    result.beta = from_dense(beta, ops.index_set);
    return result;
}

FitResult fit(const Dictionary& dict, const Dataset& data, const SolverConfig& cfg, std::size_t threads) {
    cfg.validate();
    FitResult out;
    out.active_set = compute_active_set(dict, data, cfg.lambda, cfg.epsilon, threads);
    const auto ops = assemble_empirical(dict, data, out.active_set, threads);
    out.solver = solve(ops, cfg, weights_of(dict));
    return out;
}

}  // namespace enetfp
