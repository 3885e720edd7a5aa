#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "enetfp/dictionary.hpp"
#include "enetfp/feature_id.hpp"
#include "enetfp/operators.hpp"
#include "enetfp/prox.hpp"

namespace enetfp {

struct SolverConfig {
    double epsilon = 1.0;
    double lambda = 1.0;
    double kappa = 1.0;
    double kappa_minus = 0.0;
    double target_accuracy = 1e-8;  // eta
    std::size_t max_iter = 1'000'000;
    /// Bound M >= |Phi_n^* Y|_2 for the reported a-priori bound; defaults to
    /// the computed norm of the moment vector.
    std::optional<double> moment_bound;

    /// Throws ConfigError unless lambda > 0, kappa > 0, kappa >= kappa_minus >= 0,
    /// eps >= 0, (eps > 0 or kappa_minus > 0) and eta > 0.
    void validate() const;

    double tau() const { return 0.5 * (kappa_minus + kappa); }
};

struct SolverResult {
    Coefficients beta;
    std::size_t iterations = 0;
    double a_priori_bound = 0.0;    // q^l / (kappa_- + eps lambda) * M
    double posterior_bound = 0.0;   // q / (1 - q) * |beta^l - beta^{l-1}|
    double kkt_residual = 0.0;
    double kkt_tolerance = 0.0;     // certification threshold used for `converged`
    double contraction = 0.0;       // q
    std::size_t active_set_size = 0;
    bool converged = false;
};

/// Called with (l, beta^l) for l = 0, 1, ... over ops.index_set.
using IterationObserver = std::function<void(std::size_t, const Eigen::VectorXd&)>;

/// Gamma_lambda = { gamma : |phi|_n != 0 and w <= 2 |Y|_n (|phi|_n + sqrt(eps lambda)) / lambda },
/// zero-weight features with nonzero empirical norm included. Always a
/// superset of the estimator's support. Throws UnboundedActiveSetError for
/// uncapped generators whose weights do not grow.
std::vector<FeatureId> compute_active_set(const Dictionary& dict, const Dataset& data,
                                          double lambda, double epsilon, std::size_t threads = 0);

/// Same test applied to precomputed norms.
bool passes_truncation_test(double weight, double feature_norm, double y_norm, double lambda,
                            double epsilon);

/// q = (kappa - kappa_-) / (kappa + kappa_- + 2 eps lambda).
double lipschitz_constant(double kappa, double kappa_minus, double epsilon, double lambda);

/// Number of steps after which the a-priori bound
/// q^l / (kappa_- + eps lambda) * M drops below eta (kappa_- = 0 gives the
/// familiar log(M / (eps lambda eta)) / log(1 + 2 eps lambda / kappa)).
std::size_t a_priori_iteration_count(const SolverConfig& cfg, double moment_norm);

/// One application of T_n beta = S_lambda((tau I - G) beta + m) / (tau + eps lambda).
Coefficients fixed_point_step(const EmpiricalOperators& ops, const Coefficients& beta,
                              const SolverConfig& cfg, const WeightFn& weights);
Eigen::VectorXd fixed_point_step(const EmpiricalOperators& ops, const Eigen::VectorXd& beta,
                                 const SolverConfig& cfg, const Eigen::VectorXd& weights);

/// Max over gamma of the violation of
///   m - G beta - eps lambda beta in (lambda / 2) w sgn(beta)
/// (interval condition where beta_gamma = 0).
double kkt_residual(const EmpiricalOperators& ops, const Eigen::VectorXd& beta, const SolverConfig& cfg,
                    const Eigen::VectorXd& weights);
double kkt_residual(const EmpiricalOperators& ops, const Coefficients& beta, const SolverConfig& cfg,
                    const WeightFn& weights);

/// max(1e-8, 10 eta (kappa + eps lambda)).
double certification_tolerance(const SolverConfig& cfg);

/// Weight vector over ops.index_set.
Eigen::VectorXd weight_vector(const EmpiricalOperators& ops, const WeightFn& weights);

/// Successive approximation beta^0 = start (0 by default), beta^l = T_n beta^{l-1}.
/// Stops once q^l/(1-q) |beta^1 - beta^0| <= eta or q/(1-q) |beta^l - beta^{l-1}| <= eta.
/// Throws ConfigError for an invalid configuration (including eps = kappa_- = 0).
SolverResult solve(const EmpiricalOperators& ops, const SolverConfig& cfg, const WeightFn& weights,
                   const Coefficients& start = {}, const IterationObserver& observer = {});

/// Convenience: truncation set, assembly and solve in one call.
struct FitResult {
    SolverResult solver;
    std::vector<FeatureId> active_set;
};
FitResult fit(const Dictionary& dict, const Dataset& data, const SolverConfig& cfg,
              std::size_t threads = 0);

}  // namespace enetfp
