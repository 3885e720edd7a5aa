#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "enetfp/dictionary.hpp"
#include "enetfp/feature_id.hpp"
#include "enetfp/operators.hpp"
#include "enetfp/solver.hpp"

namespace enetfp {

/// lambda_i = lambda_0 2^i, i = 0..count-1.
struct LambdaGrid {
    double lambda0 = 1.0;
    std::size_t count = 1;

    static constexpr double ratio = 2.0;

    void validate() const;
    std::vector<double> values() const;
};

struct PathConfig {
    /// epsilon, kappa, kappa_minus, eta and max_iter are used; lambda is overwritten.
    SolverConfig solver;
    /// Start each point from the previous solution restricted to the new
    /// active set. Forces a sequential sweep.
    bool warm_start = false;
    std::size_t threads = 0;
};

struct PathPoint {
    double lambda = 0.0;
    SolverResult result;
    std::size_t active_set_size = 0;
    bool ok = false;
    std::string error;
};

/// One independent solve per grid value, each over its own truncation set.
/// A point whose solve throws or does not converge is marked !ok.
std::vector<PathPoint> regularization_path(const Dictionary& dict, const Dataset& data,
                                           const LambdaGrid& grid, const PathConfig& cfg);

/// Constants of the probabilistic bounds.
struct BoundInputs {
    double kappa = 1.0;
    double sigma = 1.0;
    double L = 1.0;
    double delta = 3.0;
    double n = 1.0;
    double epsilon = 1.0;
    double kappa_minus = 0.0;
    std::optional<double> A;           // approximation-error bound
    std::optional<double> C_override;  // explicit balancing constant
    bool heuristic_C = false;          // C = C_{kappa,sigma,L} sqrt(delta) * 2

    /// Throws ConfigError unless sigma, L, kappa, n > 0, 0 < delta <= n.
    void validate() const;
};

/// max{ sqrt(2 kappa)(sigma + L), 3 kappa }.
double constant_c_kappa_sigma_l(double kappa, double sigma, double L);

struct BalancingConstant {
    double value = 0.0;
    std::string source;  // "override", "A", "heuristic"
};

/// C = C_{kappa,sigma,L} sqrt(delta) (1 + A), or the override / heuristic.
/// Throws MissingConstantError when none is available.
BalancingConstant resolve_balancing_constant(const BoundInputs& in);

struct ScanResult {
    std::size_t chosen_index = 0;
    std::size_t passed_prefix = 0;  // number of leading tests that pass
    bool first_test_failed = false;
};

/// max{ i : differences[j] <= thresholds[j] for all j <= i }; index 0 when the
/// first test already fails.
ScanResult balancing_scan(std::span<const double> differences, std::span<const double> thresholds);

struct SelectionReport {
    std::vector<double> grid;
    std::vector<std::size_t> support_sizes;
    std::vector<std::size_t> active_set_sizes;
    std::vector<double> differences;  // d_j = |beta^{l_j} - beta^{l_{j-1}}|_2, l_{-1} = l_0
    std::vector<double> thresholds;   // 4 C / (sqrt(n) eps l_{j-1})
    std::vector<bool> passes;
    std::size_t chosen_index = 0;
    double chosen_lambda = 0.0;
    Coefficients chosen_beta;
    double C = 0.0;
    std::string C_source;
    bool first_difference_is_self = true;  // d_0 compares beta^{l_0} with itself
    bool first_test_failed = false;
    bool chosen_at_grid_top = false;
};

/// Balancing-principle choice over a computed path. Throws ConfigError when a
/// path point failed or the path does not match the grid, and
/// MissingConstantError when C is unavailable.
SelectionReport balancing_select(const std::vector<PathPoint>& path, const BoundInputs& inputs,
                                 const LambdaGrid& grid);

/// Simplified bounds (valid for delta <= n) on |Phi_n^* W|_2 and
/// |Phi_n^* Phi_n - Phi_P^* Phi_P|_HS:
///   sqrt(2 kappa delta)(sigma + L) / sqrt(n),   3 kappa sqrt(delta) / sqrt(n).
std::pair<double, double> noise_and_gram_bounds(const BoundInputs& in);

/// Unsimplified forms L sqrt(kappa) delta / n + sigma sqrt(kappa) sqrt(2 delta) / sqrt(n)
/// and kappa delta / n + kappa sqrt(2 delta) / sqrt(n).
std::pair<double, double> noise_and_gram_bounds_full(const BoundInputs& in);

/// C_{kappa,sigma,L} sqrt(delta) / (sqrt(n) (kappa_- + eps lambda)) (1 + approx_error).
double sample_error_bound(const BoundInputs& in, double lambda, double approx_error);

/// Finite linearly independent dictionary, lambda = 1/sqrt(n):
///   C sqrt(delta) / (sqrt(n) kappa_-) (1 + D N* / sqrt(n)) + D N* / sqrt(n),
///   D = w* / (2 kappa_-) + eps |beta_dagger|_inf.
double finite_dim_rate_bound(const BoundInputs& in, std::size_t n_star, double w_star,
                             double beta_inf);

/// Deviation bound for |Phi_n^*(f^l - f*) - Phi_P^*(f^l - f*)|_2 without the
/// sparsity assumption (formula only):
///   sqrt(kappa) delta D / (sqrt(lambda) n) + sqrt(2 kappa delta) |f^l - f*|_P / sqrt(n).
double universal_consistency_bound(const BoundInputs& in, double lambda, double D,
                                   double approx_prediction_error);

/// lambda_0 = 1 / (A eps sqrt(n)).
double default_lambda0(double A, double epsilon, double n);

/// A = |beta_dagger|_2 + p_eps(beta_dagger) / sqrt(eps).
double approximation_constant(const Coefficients& beta_dagger, double epsilon, const WeightFn& weights);

}  // namespace enetfp
