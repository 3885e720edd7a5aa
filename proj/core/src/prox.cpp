#include "enetfp/prox.hpp"

#include <cmath>

#include "enetfp/errors.hpp"

namespace enetfp {

WeightFn weights_of(const Dictionary& dict) {
    return [&dict](const FeatureId& id) { return dict.weight(id); };
}

double soft_threshold_scalar(double t, double threshold) {
    if (!(threshold >= 0.0)) throw ConfigError("soft threshold: negative threshold");
    const double half = 0.5 * threshold;
    if (t > half) return t - half;
    if (t < -half) return t + half;
    return 0.0;
}

Coefficients soft_threshold_vector(const Coefficients& beta, double lambda, const WeightFn& weights) {
    if (!(lambda > 0.0)) throw ConfigError("soft threshold: lambda must be positive");
    Coefficients out;
    for (const auto& [id, value] : beta) {
        const double v = soft_threshold_scalar(value, lambda * weights(id));
        if (v != 0.0) out.emplace_hint(out.end(), id, v);
    }
    return out;
}

Eigen::VectorXd soft_threshold_dense(const Eigen::VectorXd& values, double lambda, const Eigen::VectorXd& weights) {
    Eigen::VectorXd out(values.size());
    for (Eigen::Index c = 0; c < values.size(); ++c) out(c) = soft_threshold_scalar(values(c), lambda * weights(c));
    return out;
}

double penalty_value(const Coefficients& beta, const PenaltyConfig& cfg) {
    if (!(cfg.epsilon >= 0.0)) throw ConfigError("penalty: epsilon must be >= 0");
    double total = 0.0;
    for (const auto& [id, value] : beta) total += cfg.weights(id) * std::abs(value) + cfg.epsilon * value * value;
    return total;
}

}  // namespace enetfp
