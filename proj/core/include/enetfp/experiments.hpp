#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "enetfp/datagen.hpp"
#include "enetfp/dictionary.hpp"
#include "enetfp/feature_id.hpp"
#include "enetfp/oracle.hpp"

namespace enetfp {

/// Synthetic regression problem with a known generating vector.
struct SyntheticProblem {
    std::string name;
    std::shared_ptr<const Dictionary> dict;
    Coefficients beta_star;
    NoiseModel noise;
    double kappa = 1.0;
};

/// phi_1 = 1, phi_2 = x, phi_3 = 1 - x on [0, 1] (linearly dependent),
/// unit weights, beta* = (0, 1, 0), kappa = 2.
SyntheticProblem dependent_three_problem(const NoiseModel& noise);

/// Rescaled Haar dictionary with a sparse generating vector.
SyntheticProblem haar_problem(const WaveletSpec& spec, Coefficients beta_star, const NoiseModel& noise);

struct ConsistencySpec {
    SyntheticProblem problem;
    std::vector<std::size_t> n_schedule{100, 400, 1600, 6400};
    double rate = 1.0 / 3.0;  // lambda_n = n^{-rate}, rate in (0, 1/2)
    std::vector<std::uint64_t> seeds;
    double epsilon = 1.0;
    double eta = 1e-8;
    std::size_t max_iter = 5'000'000;
    std::size_t holdout_factor = 10;
    std::size_t oracle_sample = 4000;
    double oracle_tolerance = 1e-6;
    std::size_t threads = 0;
};

struct InstabilitySpec {
    std::size_t n = 100;
    /// Sweep pi/4 + k h for k = +-1..+-half_width (pi/4 itself excluded).
    double h = 0.01;
    std::size_t half_width = 5;
    std::vector<double> thetas;  // explicit sweep; overrides h/half_width when non-empty
    std::vector<double> epsilons{1.0, 1e-6};
    double lambda = 0.1;
    double response_scale = 2.0;
    NoiseModel noise{NoiseKind::gaussian, 0.1};
    std::vector<std::uint64_t> seeds;
    double eta = 1e-8;
    std::size_t max_iter = 20'000'000;
    std::size_t threads = 0;

    std::vector<double> sweep() const;
};

struct AdaptiveSpec {
    SyntheticProblem problem;
    std::vector<std::size_t> n_schedule{1600};
    std::vector<std::uint64_t> seeds;
    double epsilon = 1.0;
    double delta = 3.0;
    std::optional<double> lambda0;  // default 1 / (A eps sqrt(n))
    std::size_t grid_count = 10;
    double eta = 1e-8;
    std::size_t max_iter = 5'000'000;
    std::size_t oracle_sample = 4000;
    double oracle_tolerance = 1e-6;
    std::size_t threads = 0;
};

struct ExperimentCell {
    std::uint64_t seed = 0;
    std::map<std::string, double> params;
    std::map<std::string, double> metrics;
    Coefficients beta;
};

struct ExperimentReport {
    std::string kind;
    std::vector<ExperimentCell> cells;
    std::map<std::string, double> summary;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    std::vector<std::uint64_t> seeds;
    std::string config_hash;
};

/// Median and quartiles (linear interpolation between order statistics).
struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};
Quartiles quartiles(std::vector<double> values);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// beta_dagger for a synthetic problem, computed by the oracle on a noiseless sample.
Representation problem_representation(const SyntheticProblem& problem, double epsilon,
                                      std::size_t oracle_sample, double tolerance,
                                      std::size_t threads = 0);

/// Fits with lambda_n = n^{-rate} for every (n, seed); records |beta_n - beta_dagger|_2
/// and the holdout prediction error. Summary: per-n medians, Spearman(log n, median).
ExperimentReport run_consistency(const ConsistencySpec& spec);

/// Collinear two-feature sweep around pi/4 for every (theta, eps, seed).
/// Summary: two-nonzero window per eps, Delta(eps) per seed, contrast fraction.
ExperimentReport run_instability_demo(const InstabilitySpec& spec);

/// Balancing-principle choice per (n, seed) versus the best grid error.
ExperimentReport run_adaptive(const AdaptiveSpec& spec);

/// 64-bit FNV-1a of a string (stable config fingerprint).
std::string fingerprint(const std::string& text);

}  // namespace enetfp
