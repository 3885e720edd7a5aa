#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enetfp/feature_id.hpp"

namespace enetfp {

/// A countable family of (already rescaled) features x -> phi_gamma(x) with
/// values in R^m, per-feature weights w_gamma >= 0 and a uniform bound
/// kappa >= sum_gamma |phi_gamma(x)|^2. Immutable after construction.
class Dictionary {
public:
    virtual ~Dictionary() = default;

    virtual std::size_t input_dim() const = 0;
    virtual std::size_t output_dim() const = 0;

    /// False for generators without a level cap; enumerate() then throws.
    virtual bool is_finite() const = 0;

    /// Ordered list of all feature ids. Throws ConfigError when !is_finite().
    virtual std::vector<FeatureId> enumerate() const = 0;

    virtual bool contains(const FeatureId& id) const = 0;

    /// phi_gamma(x). Throws LookupError / DomainError.
    virtual Eigen::VectorXd evaluate(const FeatureId& id, std::span<const double> x) const = 0;

    virtual double weight(const FeatureId& id) const = 0;

    /// Upper bound on sup_x |phi_gamma(x)|, used to prefilter truncation candidates.
    virtual double sup_norm(const FeatureId& id) const = 0;

    /// Closed-form kappa when the dictionary knows it.
    virtual std::optional<double> analytic_kappa() const { return std::nullopt; }

    /// Every feature that could satisfy w_gamma <= scale * (|phi_gamma| + offset)
    /// for some sample, i.e. a finite superset of the truncation set. Finite
    /// dictionaries return enumerate().
    virtual std::vector<FeatureId> truncation_candidates(double scale, double offset) const;

    /// k(x) = sum over enumerated features of |phi_gamma(x)|^2.
    double feature_energy(std::span<const double> x) const;
};

/// One entry of an explicit dictionary.
struct ExplicitFeature {
    std::function<Eigen::VectorXd(std::span<const double>)> fn;
    double weight = 1.0;
    std::string name;
};

/// Finite dictionary of user-supplied features, ids (0, 0..p-1).
class ExplicitDictionary final : public Dictionary {
public:
    /// kappa is estimated from probe points; see kappa_bound().
    ExplicitDictionary(std::size_t input_dim, std::size_t output_dim,
                       std::vector<ExplicitFeature> features,
                       std::optional<double> kappa = std::nullopt);

    std::size_t input_dim() const override { return input_dim_; }
    std::size_t output_dim() const override { return output_dim_; }
    bool is_finite() const override { return true; }
    std::vector<FeatureId> enumerate() const override;
    bool contains(const FeatureId& id) const override;
    Eigen::VectorXd evaluate(const FeatureId& id, std::span<const double> x) const override;
    double weight(const FeatureId& id) const override;
    double sup_norm(const FeatureId& id) const override;
    std::optional<double> analytic_kappa() const override { return kappa_; }

    std::size_t size() const { return features_.size(); }
    const ExplicitFeature& feature(std::size_t index) const { return features_.at(index); }

private:
    std::size_t index_of(const FeatureId& id) const;

    std::size_t input_dim_;
    std::size_t output_dim_;
    std::vector<ExplicitFeature> features_;
    std::optional<double> kappa_;
};

/// phi_j(x) = x_j for j < d, scalar output, weights given (default 1).
/// This is how tabulated feature matrices (rows = samples) are represented:
/// the rows are the inputs and every column is a coordinate feature.
std::shared_ptr<ExplicitDictionary> linear_dictionary(std::size_t input_dim,
                                                      std::vector<double> weights = {});

struct WaveletSpec {
    /// Finest level J; std::nullopt means no cap (requires weight_exponent > 0
    /// for truncation to terminate).
    std::optional<int> max_level = 0;
    double smoothness = 1.0;       // s > 1/2
    double weight_exponent = 0.0;  // a, w_jk = 2^{j a}
};

/// Rescaled Haar system on [0, 1]:
///   (0, 0)  scaling function, constant 1
///   (0, 1)  mother wavelet psi
///   (j, k)  2^{-j s} 2^{j/2} psi(2^j x - k), j >= 1, k = 0..2^j-1
/// psi = 1 on [0, 1/2), -1 on [1/2, 1); x = 1 belongs to the last interval.
class HaarDictionary final : public Dictionary {
public:
    explicit HaarDictionary(WaveletSpec spec);

    std::size_t input_dim() const override { return 1; }
    std::size_t output_dim() const override { return 1; }
    bool is_finite() const override { return spec_.max_level.has_value(); }
    std::vector<FeatureId> enumerate() const override;
    bool contains(const FeatureId& id) const override;
    Eigen::VectorXd evaluate(const FeatureId& id, std::span<const double> x) const override;
    double weight(const FeatureId& id) const override;
    double sup_norm(const FeatureId& id) const override;
    std::optional<double> analytic_kappa() const override { return series_kappa(spec_.smoothness); }
    std::vector<FeatureId> truncation_candidates(double scale, double offset) const override;

    const WaveletSpec& spec() const { return spec_; }

    /// Ids of levels 0..max_level inclusive.
    std::vector<FeatureId> enumerate_levels(int max_level) const;

    /// Scalar value of feature id at x in [0, 1].
    double value(const FeatureId& id, double x) const;

    /// 2 + sum_{j>=1} 2^{j(1-2s)}: k(x) of the uncapped family, identical for all x.
    static double series_kappa(double smoothness);

    /// Unrescaled Haar mother wavelet with the half-open convention.
    static double mother(double t);

private:
    WaveletSpec spec_;
};

/// Max of k(x) over the probe points, or the closed-form value for
/// dictionaries that provide one. Throws ConfigError on an empty probe set
/// for dictionaries without an analytic kappa.
double kappa_bound(const Dictionary& dict, std::span<const Eigen::VectorXd> probe_points);

/// Same, with probes given as rows of a matrix.
double kappa_bound(const Dictionary& dict, const Eigen::MatrixXd& probe_rows);

}  // namespace enetfp
