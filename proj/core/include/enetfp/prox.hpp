#pragma once

#include <Eigen/Dense>

#include <functional>

#include "enetfp/dictionary.hpp"
#include "enetfp/feature_id.hpp"

namespace enetfp {

using WeightFn = std::function<double(const FeatureId&)>;

/// Weight lookup backed by a dictionary.
WeightFn weights_of(const Dictionary& dict);

/// S_threshold(t): the kink sits at threshold / 2.
///   t - threshold/2   if t >  threshold/2
///   0                 if |t| <= threshold/2
///   t + threshold/2   if t < -threshold/2
/// Throws ConfigError for a negative threshold.
double soft_threshold_scalar(double t, double threshold);

/// Componentwise S_{lambda w_gamma}(beta_gamma); entries mapped to zero are
/// dropped from the support. Requires lambda > 0.
Coefficients soft_threshold_vector(const Coefficients& beta, double lambda, const WeightFn& weights);

/// Dense variant over a fixed index set: out_c = S_{lambda w_c}(values_c).
Eigen::VectorXd soft_threshold_dense(const Eigen::VectorXd& values, double lambda,
                                     const Eigen::VectorXd& weights);

struct PenaltyConfig {
    double epsilon = 0.0;
    WeightFn weights;
};

/// p_eps(beta) = sum_gamma (w_gamma |beta_gamma| + eps beta_gamma^2).
double penalty_value(const Coefficients& beta, const PenaltyConfig& cfg);

}  // namespace enetfp
