#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "enetfp/dictionary.hpp"
#include "enetfp/errors.hpp"
#include "enetfp/feature_id.hpp"
#include "enetfp/operators.hpp"
#include "enetfp/prox.hpp"

// Reference solvers that share no code path with the fixed-point iteration.
// They validate the solver and produce ground truth on synthetic problems.

namespace enetfp {

/// Dense penalized least-squares problem
///   J(beta) = |Y|_n^2 - 2 m.beta + beta.G beta + lambda sum_c (w_c |beta_c| + eps beta_c^2).
struct OracleProblem {
    Eigen::MatrixXd gram;
    Eigen::VectorXd moment;
    Eigen::VectorXd weights;
    double y_norm_sq = 0.0;
    double epsilon = 0.0;
    double lambda = 1.0;

    std::size_t size() const { return static_cast<std::size_t>(moment.size()); }
};

OracleProblem make_oracle_problem(const EmpiricalOperators& ops, double epsilon, double lambda,
                                  const WeightFn& weights);

double objective(const OracleProblem& problem, const Eigen::VectorXd& beta);

/// Solves (G + eps lambda I) beta = m by Cholesky (LDLT fallback). Requires
/// w = 0; throws ConfigError for nonzero weights and when eps = 0 and G is singular.
Eigen::VectorXd ridge_solve(const OracleProblem& problem);

/// |Y|_n / sqrt(eps lambda): every minimizer satisfies |beta|_2 below it.
double coercivity_box(const OracleProblem& problem);

/// Exhaustive search of J over the lattice {k step : |k step| <= box}^p, p <= 3.
/// Ties resolve to the lexicographically smallest coordinate vector.
/// Throws ConfigError for p > 3, step <= 0, eps lambda = 0 or box below coercivity_box().
Eigen::VectorXd bruteforce_solve(const OracleProblem& problem, double box, double step,
                                 std::size_t threads = 0);

/// Given a candidate, fixes its sign pattern and solves the restricted
/// optimality system (G_SS + eps lambda I) beta_S = m_S - lambda/2 w_S sgn(beta_S)
/// directly. Returns the exact minimizer when the pattern is correct.
Eigen::VectorXd sign_pattern_solve(const OracleProblem& problem, const Eigen::VectorXd& candidate);

struct RepresentationOptions {
    double epsilon = 1.0;
    double kappa = 1.0;
    double kappa_minus = 0.0;
    double lambda_init = 1.0;
    double tolerance = 1e-6;      // stop when |beta^{l_k} - beta^{l_{k+1}}|_2 <= tolerance
    std::size_t max_halvings = 40;
    double solver_accuracy = 1e-10;
    std::size_t max_iter = 50'000'000;
    std::size_t threads = 0;
};

struct Representation {
    Coefficients beta;
    double achieved_tolerance = 0.0;
    double final_lambda = 0.0;
    std::vector<double> lambdas;
    std::vector<Coefficients> path;
    std::vector<double> penalties;   // p_eps along the path
    double constraint_residual = 0.0; // |Phi beta - f*|_n on the design
};

/// Thrown when the lambda sequence does not settle within the budget.
class RepresentationError : public ConvergenceError {
public:
    RepresentationError(const std::string& what, Coefficients last, Coefficients previous)
        : ConvergenceError(what), last_(std::move(last)), previous_(std::move(previous)) {}
    const Coefficients& last() const { return last_; }
    const Coefficients& previous() const { return previous_; }

private:
    Coefficients last_;
    Coefficients previous_;
};

/// beta_dagger = argmin p_eps over { beta : Phi beta = f* } approximated by the
/// penalized minimizers on noiseless data along lambda_k = lambda_init 2^{-k}.
Representation enet_representation(const Dictionary& dict, const Eigen::MatrixXd& design_inputs,
                                    const Coefficients& beta_star, const RepresentationOptions& options);

/// Monte-Carlo stand-in for the population minimizer beta^lambda: the
/// empirical minimizer on n_oracle noiseless uniform[0,1]^d inputs.
Coefficients population_minimizer(const Dictionary& dict, const Coefficients& beta_star, double lambda,
                                  double epsilon, double kappa, std::size_t n_oracle, std::uint64_t seed,
                                  double solver_accuracy = 1e-10, std::size_t threads = 0);

}  // namespace enetfp
