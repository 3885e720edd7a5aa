#include "enetfp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "enetfp/datagen.hpp"
#include "enetfp/parallel.hpp"
#include "enetfp/solver.hpp"

namespace enetfp {

OracleProblem make_oracle_problem(const EmpiricalOperators& ops, double epsilon, double lambda,
                                  const WeightFn& weights) {
    OracleProblem problem;
    problem.gram = ops.gram;
    problem.moment = ops.moment;
    problem.weights = weight_vector(ops, weights);
    problem.y_norm_sq = ops.y_norm * ops.y_norm;
    problem.epsilon = epsilon;
    problem.lambda = lambda;
    return problem;
}

double objective(const OracleProblem& problem, const Eigen::VectorXd& beta) {
    double penalty = 0.0;
    for (Eigen::Index c = 0; c < beta.size(); ++c) {
        penalty += problem.weights(c) * std::abs(beta(c)) + problem.epsilon * beta(c) * beta(c);
    }
    return problem.y_norm_sq - 2.0 * problem.moment.dot(beta) + beta.dot(problem.gram * beta) +
           problem.lambda * penalty;
}

Eigen::VectorXd ridge_solve(const OracleProblem& problem) {
    if (problem.weights.size() > 0 && problem.weights.cwiseAbs().maxCoeff() != 0.0) {
        throw ConfigError("ridge oracle: all weights must be zero");
    }
    const auto p = static_cast<Eigen::Index>(problem.size());
    const double shift = problem.epsilon * problem.lambda;
    const Eigen::MatrixXd a = problem.gram + shift * Eigen::MatrixXd::Identity(p, p);
    if (shift == 0.0 && p > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        if (es.eigenvalues().minCoeff() <= 1e-12 * top) throw ConfigError("ridge oracle: singular system with eps = 0");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return llt.solve(problem.moment);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw ConfigError("ridge oracle: factorization failed");
    return ldlt.solve(problem.moment);
}

double coercivity_box(const OracleProblem& problem) {
    const double el = problem.epsilon * problem.lambda;
    if (!(el > 0.0)) throw ConfigError("coercivity box: needs eps lambda > 0");
    return std::sqrt(problem.y_norm_sq) / std::sqrt(el);
}

Eigen::VectorXd bruteforce_solve(const OracleProblem& problem, double box, double step, std::size_t threads) {
    const std::size_t p = problem.size();
    if (p == 0) return Eigen::VectorXd();
    if (p > 3) throw ConfigError("lattice oracle: at most 3 coordinates");
    if (!(step > 0.0)) throw ConfigError("lattice oracle: step must be positive");
    const double needed = coercivity_box(problem);
    if (box < needed) {
        throw ConfigError("lattice oracle: box " + std::to_string(box) + " is below the coercivity bound " +
                          std::to_string(needed));
    }

    const auto half = static_cast<std::int64_t>(std::ceil(box / step));
    const std::int64_t side = 2 * half + 1;
    const std::size_t outer = static_cast<std::size_t>(side);
    std::int64_t inner = 1;
    for (std::size_t c = 1; c < p; ++c) inner *= side;

    struct Best {
        double value = std::numeric_limits<double>::infinity();
        Eigen::VectorXd beta;
    };
    std::vector<Best> best(outer);

    parallel_for(
        outer,
        [&](std::size_t block) {
            Eigen::VectorXd beta(static_cast<Eigen::Index>(p));
            beta(0) = static_cast<double>(static_cast<std::int64_t>(block) - half) * step;
            Best local;
            for (std::int64_t idx = 0; idx < inner; ++idx) {
                std::int64_t rest = idx;
                // Last coordinate varies fastest: lexicographic order.
                for (std::size_t c = p - 1; c >= 1; --c) {
                    beta(static_cast<Eigen::Index>(c)) = static_cast<double>(rest % side - half) * step;
                    rest /= side;
                }
                const double value = objective(problem, beta);
                if (value < local.value) {
                    local.value = value;
                    local.beta = beta;
                }
            }
            best[block] = std::move(local);
        },
        threads);

    Best global;
    for (auto& b : best) {
        if (b.value < global.value) global = std::move(b);
    }
    return global.beta;
}

Eigen::VectorXd sign_pattern_solve(const OracleProblem& problem, const Eigen::VectorXd& candidate) {
    const auto p = static_cast<Eigen::Index>(problem.size());
    if (candidate.size() != p) throw DataError("sign pattern solve: dimension mismatch");
    std::vector<Eigen::Index> support;
    for (Eigen::Index c = 0; c < p; ++c) {
        if (candidate(c) != 0.0) support.push_back(c);
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
    const auto s = static_cast<Eigen::Index>(support.size());
    if (s == 0) return out;

    Eigen::MatrixXd a(s, s);
    Eigen::VectorXd rhs(s);
    const double el = problem.epsilon * problem.lambda;
    for (Eigen::Index i = 0; i < s; ++i) {
        const auto ci = support[static_cast<std::size_t>(i)];
        const double sign = candidate(ci) > 0.0 ? 1.0 : -1.0;
        rhs(i) = problem.moment(ci) - 0.5 * problem.lambda * problem.weights(ci) * sign;
        for (Eigen::Index j = 0; j < s; ++j) a(i, j) = problem.gram(ci, support[static_cast<std::size_t>(j)]);
        a(i, i) += el;
    }
    const Eigen::VectorXd solution = a.ldlt().solve(rhs);
    for (Eigen::Index i = 0; i < s; ++i) out(support[static_cast<std::size_t>(i)]) = solution(i);
    return out;
}

namespace {

// Iterates in chunks and tries the sign-pattern system after each chunk;
// returns as soon as either route certifies the KKT conditions.
Eigen::VectorXd certified_minimizer(const EmpiricalOperators& ops, const SolverConfig& cfg, const WeightFn& weights,
                                    const Coefficients& start, std::size_t max_iter) {
    const OracleProblem problem = make_oracle_problem(ops, cfg.epsilon, cfg.lambda, weights);
    const Eigen::VectorXd w = problem.weights;
    const double target = 1e-12 * std::max(1.0, ops.moment.cwiseAbs().maxCoeff());

    SolverConfig chunk_cfg = cfg;
    chunk_cfg.max_iter = 2000;
    Coefficients current = start;
    std::size_t spent = 0;
    for (;;) {
        const SolverResult r = solve(ops, chunk_cfg, weights, current);
        spent += r.iterations;
        current = r.beta;
        const Eigen::VectorXd dense = to_dense(current, ops.index_set);
        const Eigen::VectorXd polished = sign_pattern_solve(problem, dense);
        // The polished point must keep the sign pattern to be a KKT point.
        bool consistent = true;
        for (Eigen::Index c = 0; c < dense.size(); ++c) {
            if (dense(c) != 0.0 && (polished(c) > 0.0) != (dense(c) > 0.0)) consistent = false;
        }
        if (consistent && kkt_residual(ops, polished, cfg, w) <= target) return polished;
        if (r.converged) return dense;
        if (spent >= max_iter) {
            throw ConvergenceError("oracle solve: no certified minimizer after " + std::to_string(spent) +
                                   " iterations (lambda = " + std::to_string(cfg.lambda) + ")");
        }
    }
}

}  // namespace

Representation enet_representation(const Dictionary& dict, const Eigen::MatrixXd& design_inputs,
                                    const Coefficients& beta_star, const RepresentationOptions& options) {
    if (!(options.epsilon > 0.0)) throw ConfigError("elastic-net representation: eps must be positive");
    if (!(options.lambda_init > 0.0) || !(options.tolerance > 0.0)) {
        throw ConfigError("elastic-net representation: lambda_init and tolerance must be positive");
    }
    Dataset data{design_inputs, noiseless_outputs(dict, beta_star, design_inputs)};
    const auto ids = dict.enumerate();
    const auto design = sample_features(dict, data, ids, options.threads);
    const auto ops = assemble_empirical(design, data, options.threads);
    const WeightFn weights = weights_of(dict);
    const PenaltyConfig penalty{options.epsilon, weights};

    SolverConfig cfg;
    cfg.epsilon = options.epsilon;
    cfg.kappa = std::max(options.kappa, ops.trace);
    cfg.kappa_minus = options.kappa_minus;
    cfg.target_accuracy = options.solver_accuracy;

    // Above 2 max |m| / w every minimizer is zero; two such points would end
    // the sequence before it starts, so the sweep begins below that level.
    double zero_level = 0.0;
    for (std::size_t c = 0; c < ids.size(); ++c) {
        const double m = std::abs(ops.moment(static_cast<Eigen::Index>(c)));
        const double w = weights(ids[c]);
        if (m == 0.0) continue;
        zero_level = w > 0.0 ? std::max(zero_level, 2.0 * m / w) : std::numeric_limits<double>::infinity();
    }
    const double lambda_start = zero_level > 0.0 ? std::min(options.lambda_init, 0.5 * zero_level) : options.lambda_init;

    Representation rep;
    Coefficients previous;
    for (std::size_t k = 0; k <= options.max_halvings; ++k) {
        cfg.lambda = lambda_start * std::exp2(-static_cast<double>(k));
        const Eigen::VectorXd beta = certified_minimizer(ops, cfg, weights, previous, options.max_iter);
        Coefficients current = from_dense(beta, ids);
        rep.lambdas.push_back(cfg.lambda);
        rep.penalties.push_back(penalty_value(current, penalty));
        rep.path.push_back(current);
        if (k > 0) {
            const double diff = l2_distance(current, previous);
            if (diff <= options.tolerance) {
                rep.beta = current;
                rep.achieved_tolerance = diff;
                rep.final_lambda = cfg.lambda;
                const Eigen::VectorXd fitted = design.values * beta;
                double acc = 0.0;
                const auto m = static_cast<Eigen::Index>(data.output_dim());
                for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(data.size()); ++i) {
                    for (Eigen::Index r = 0; r < m; ++r) {
                        const double d = fitted(i * m + r) - data.outputs(i, r);
                        acc += d * d;
                    }
                }
                rep.constraint_residual = std::sqrt(acc / static_cast<double>(data.size()));
                return rep;
            }
        }
        previous = std::move(current);
    }
    const Coefficients last = rep.path.back();
    const Coefficients before = rep.path.size() > 1 ? rep.path[rep.path.size() - 2] : Coefficients{};
    throw RepresentationError("elastic-net representation: lambda sequence did not settle within " +
                                  std::to_string(options.max_halvings) + " halvings (last difference " +
                                  std::to_string(l2_distance(last, before)) + ")",
                              last, before);
}

Coefficients population_minimizer(const Dictionary& dict, const Coefficients& beta_star, double lambda,
                                  double epsilon, double kappa, std::size_t n_oracle, std::uint64_t seed,
                                  double solver_accuracy, std::size_t threads) {
    std::mt19937_64 rng(derive_seed(seed, 0x6f7261636c65ULL));
    Eigen::MatrixXd inputs = uniform_inputs(n_oracle, dict.input_dim(), rng);
    Dataset data{inputs, noiseless_outputs(dict, beta_star, inputs)};
    const auto ids = dict.enumerate();
    const auto ops = assemble_empirical(dict, data, ids, threads);

    SolverConfig cfg;
    cfg.epsilon = epsilon;
    cfg.lambda = lambda;
    cfg.kappa = std::max(kappa, ops.trace);
    cfg.target_accuracy = solver_accuracy;
    const Eigen::VectorXd beta = certified_minimizer(ops, cfg, weights_of(dict), {}, 50'000'000);
    return from_dense(beta, ids);
}

}  // namespace enetfp
