#pragma once

// Hand-rolled random instance generators and independent reference
// computations shared by the unit and acceptance suites.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "enetfp/enetfp.hpp"

namespace enetfp::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<FeatureId> linear_ids(std::size_t p) {
    std::vector<FeatureId> ids;
    for (std::size_t j = 0; j < p; ++j) ids.push_back({0, static_cast<std::int64_t>(j)});
    return ids;
}

/// Operators built from an explicit design V (n x p) and responses y by
/// plain loops, independent of assemble_empirical.
inline EmpiricalOperators operators_from_design(const Eigen::MatrixXd& v, const Eigen::VectorXd& y) {
    const auto n = v.rows();
    const auto p = v.cols();
    EmpiricalOperators ops;
    ops.index_set = linear_ids(static_cast<std::size_t>(p));
    ops.gram = Eigen::MatrixXd::Zero(p, p);
    ops.moment = Eigen::VectorXd::Zero(p);
    for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = 0; b < p; ++b) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) s += v(i, a) * v(i, b);
            ops.gram(a, b) = s / static_cast<double>(n);
        }
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += v(i, a) * y(i);
        ops.moment(a) = s / static_cast<double>(n);
    }
    ops.trace = ops.gram.trace();
    ops.y_norm = std::sqrt(y.squaredNorm() / static_cast<double>(n));
    ops.sample_count = static_cast<std::size_t>(n);
    return ops;
}

/// Random regression instance: design entries uniform in [-s, s] with
/// s = 1/sqrt(p), so every row has squared norm <= 1 (kappa = 1).
struct Instance {
    Eigen::MatrixXd design;
    Eigen::VectorXd y;
    Eigen::VectorXd weights;
    EmpiricalOperators ops;
};

inline Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t p, double zero_weight_prob = 0.1) {
    Instance inst;
    const double s = 1.0 / std::sqrt(static_cast<double>(p));
    inst.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < inst.design.rows(); ++i) {
        for (Eigen::Index j = 0; j < inst.design.cols(); ++j) inst.design(i, j) = uniform(rng, -s, s);
    }
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (uniform(rng, 0, 1) < 0.3) beta(j) = uniform(rng, -3, 3);
    }
    inst.y = inst.design * beta;
    for (Eigen::Index i = 0; i < inst.y.size(); ++i) inst.y(i) += uniform(rng, -0.3, 0.3);
    inst.weights.resize(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < inst.weights.size(); ++j) {
        inst.weights(j) = uniform(rng, 0, 1) < zero_weight_prob ? 0.0 : uniform(rng, 0.2, 2.0);
    }
    inst.ops = operators_from_design(inst.design, inst.y);
    return inst;
}

inline WeightFn weight_fn(const Eigen::VectorXd& w) {
    return [w](const FeatureId& id) { return w(static_cast<Eigen::Index>(id.position)); };
}

/// Dataset whose x columns are the design (for linear_dictionary).
inline Dataset dataset_of(const Instance& inst) {
    Dataset data;
    data.inputs = inst.design;
    data.outputs = inst.y;
    return data;
}

/// Componentwise closed form for gram = I.
inline Eigen::VectorXd orthonormal_solution(const Eigen::VectorXd& moment, const Eigen::VectorXd& w, double lambda,
                                            double eps) {
    Eigen::VectorXd out(moment.size());
    for (Eigen::Index j = 0; j < moment.size(); ++j) {
        const double t = lambda * w(j) / 2.0;
        const double m = moment(j);
        const double shrunk = m > t ? m - t : (m < -t ? m + t : 0.0);
        out(j) = shrunk / (1.0 + eps * lambda);
    }
    return out;
}

/// Max-prefix scan written directly from the definition.
inline std::size_t reference_balancing_index(const std::vector<double>& d, const std::vector<double>& thr) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j <= i; ++j) all = all && d[j] <= thr[j];
        if (all) best = i;
    }
    return best;
}

}  // namespace enetfp::testing
