#include "enetfp/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enetfp/errors.hpp"

namespace enetfp {

std::vector<FeatureId> Dictionary::truncation_candidates(double, double) const {
    return enumerate();
}

double Dictionary::feature_energy(std::span<const double> x) const {
    double total = 0.0;
    for (const auto& id : enumerate()) total += evaluate(id, x).squaredNorm();
    return total;
}

// ---------------------------------------------------------------------------
// ExplicitDictionary

ExplicitDictionary::ExplicitDictionary(std::size_t input_dim, std::size_t output_dim,
                                       std::vector<ExplicitFeature> features,
                                       std::optional<double> kappa)
    : input_dim_(input_dim), output_dim_(output_dim), features_(std::move(features)), kappa_(kappa) {
    if (output_dim_ == 0) throw ConfigError("explicit dictionary: output dimension must be positive");
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& f = features_[i];
        if (!f.fn) throw ConfigError("explicit dictionary: feature " + std::to_string(i) + " has no function");
        if (!(f.weight >= 0.0) || !std::isfinite(f.weight)) {
            throw ConfigError("explicit dictionary: feature " + std::to_string(i) + " has a negative weight");
        }
    }
    if (kappa_ && !(*kappa_ > 0.0)) throw ConfigError("explicit dictionary: kappa must be positive");
}

std::vector<FeatureId> ExplicitDictionary::enumerate() const {
    std::vector<FeatureId> ids;
    ids.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) ids.push_back({0, static_cast<std::int64_t>(i)});
    return ids;
}

bool ExplicitDictionary::contains(const FeatureId& id) const {
    return id.level == 0 && id.position >= 0 && static_cast<std::size_t>(id.position) < features_.size();
}

std::size_t ExplicitDictionary::index_of(const FeatureId& id) const {
    if (!contains(id)) throw LookupError("explicit dictionary: unknown feature " + to_string(id));
    return static_cast<std::size_t>(id.position);
}

Eigen::VectorXd ExplicitDictionary::evaluate(const FeatureId& id, std::span<const double> x) const {
    const auto& f = features_[index_of(id)];
    if (x.size() != input_dim_) {
        throw DomainError("explicit dictionary: expected input of dimension " + std::to_string(input_dim_) +
                          ", got " + std::to_string(x.size()));
    }
    Eigen::VectorXd value = f.fn(x);
    if (static_cast<std::size_t>(value.size()) != output_dim_) {
        throw DataError("explicit dictionary: feature " + to_string(id) + " returned dimension " +
                        std::to_string(value.size()));
    }
    return value;
}

double ExplicitDictionary::weight(const FeatureId& id) const { return features_[index_of(id)].weight; }

double ExplicitDictionary::sup_norm(const FeatureId& id) const {
    index_of(id);
    return std::numeric_limits<double>::infinity();
}

std::shared_ptr<ExplicitDictionary> linear_dictionary(std::size_t input_dim, std::vector<double> weights) {
    if (weights.empty()) weights.assign(input_dim, 1.0);
    if (weights.size() != input_dim) {
        throw ConfigError("linear dictionary: " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(input_dim) + " features");
    }
    std::vector<ExplicitFeature> features;
    features.reserve(input_dim);
    for (std::size_t j = 0; j < input_dim; ++j) {
        features.push_back({[j](std::span<const double> x) {
                                Eigen::VectorXd v(1);
                                v(0) = x[j];
                                return v;
                            },
                            weights[j], "x_" + std::to_string(j + 1)});
    }
    return std::make_shared<ExplicitDictionary>(input_dim, 1, std::move(features));
}

// ---------------------------------------------------------------------------
// HaarDictionary

HaarDictionary::HaarDictionary(WaveletSpec spec) : spec_(spec) {
    if (spec_.max_level && *spec_.max_level < 0) throw ConfigError("haar dictionary: max_level must be >= 0");
    if (!(spec_.smoothness > 0.5)) {
        throw ConfigError("haar dictionary: smoothness s must exceed 1/2 (the kappa series diverges)");
    }
    if (!std::isfinite(spec_.weight_exponent)) throw ConfigError("haar dictionary: weight exponent must be finite");
    if (spec_.max_level && *spec_.max_level > 40) throw ConfigError("haar dictionary: max_level above 40");
}

double HaarDictionary::mother(double t) {
    if (t < 0.0 || t > 1.0) return 0.0;
    return t < 0.5 ? 1.0 : -1.0;
}

double HaarDictionary::series_kappa(double smoothness) {
    const double r = std::exp2(1.0 - 2.0 * smoothness);
    return 2.0 + r / (1.0 - r);
}

std::vector<FeatureId> HaarDictionary::enumerate_levels(int max_level) const {
    std::vector<FeatureId> ids{{0, 0}, {0, 1}};
    for (int j = 1; j <= max_level; ++j) {
        const std::int64_t count = std::int64_t{1} << j;
        for (std::int64_t k = 0; k < count; ++k) ids.push_back({j, k});
    }
    return ids;
}

std::vector<FeatureId> HaarDictionary::enumerate() const {
    if (!spec_.max_level) throw ConfigError("haar dictionary: cannot enumerate without a level cap");
    return enumerate_levels(*spec_.max_level);
}

bool HaarDictionary::contains(const FeatureId& id) const {
    if (id.level < 0) return false;
    if (spec_.max_level && id.level > *spec_.max_level) return false;
    if (id.level == 0) return id.position == 0 || id.position == 1;
    if (id.level > 62) return false;
    return id.position >= 0 && id.position < (std::int64_t{1} << id.level);
}

double HaarDictionary::value(const FeatureId& id, double x) const {
    if (!contains(id)) throw LookupError("haar dictionary: unknown feature " + to_string(id));
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("haar dictionary: input outside [0, 1]");
    if (id.level == 0) {
        if (id.position == 0) return 1.0;
        return mother(x);
    }
    const int j = id.level;
    const double scale = std::exp2(j);
    // Half-open dyadic cells; x = 1 belongs to the last cell.
    std::int64_t cell = static_cast<std::int64_t>(std::floor(x * scale));
    const std::int64_t cells = std::int64_t{1} << j;
    if (cell >= cells) cell = cells - 1;
    if (cell != id.position) return 0.0;
    const double t = x * scale - static_cast<double>(id.position);
    const double psi = t < 0.5 ? 1.0 : -1.0;
    return std::exp2(-j * spec_.smoothness) * std::exp2(0.5 * j) * psi;
}

Eigen::VectorXd HaarDictionary::evaluate(const FeatureId& id, std::span<const double> x) const {
    if (x.size() != 1) throw DomainError("haar dictionary: inputs are scalars in [0, 1]");
    Eigen::VectorXd v(1);
    v(0) = value(id, x[0]);
    return v;
}

double HaarDictionary::weight(const FeatureId& id) const {
    if (!contains(id)) throw LookupError("haar dictionary: unknown feature " + to_string(id));
    return std::exp2(id.level * spec_.weight_exponent);
}

double HaarDictionary::sup_norm(const FeatureId& id) const {
    if (!contains(id)) throw LookupError("haar dictionary: unknown feature " + to_string(id));
    if (id.level == 0) return 1.0;
    return std::exp2(id.level * (0.5 - spec_.smoothness));
}

std::vector<FeatureId> HaarDictionary::truncation_candidates(double scale, double offset) const {
    auto level_may_pass = [&](int j) {
        const FeatureId probe{j, 0};
        return weight(probe) <= scale * (sup_norm(probe) + offset);
    };

    int last_level = 0;
    if (spec_.max_level) {
        last_level = *spec_.max_level;
    } else {
        if (!(spec_.weight_exponent > 0.0)) {
            throw UnboundedActiveSetError(
                "haar dictionary without a level cap needs growing weights (a > 0) for a finite active set");
        }
        // Weights grow and sup norms shrink with j, so the first failing
        // level j >= 1 bounds every level above it.
        int j = 1;
        while (level_may_pass(j)) {
            ++j;
            if (j > 40) throw UnboundedActiveSetError("haar dictionary: active set exceeds 40 levels");
        }
        last_level = j - 1;
    }

    std::vector<FeatureId> ids;
    for (const auto& id : enumerate_levels(last_level)) {
        if (level_may_pass(id.level)) ids.push_back(id);
    }
    return ids;
}

// ---------------------------------------------------------------------------

double kappa_bound(const Dictionary& dict, std::span<const Eigen::VectorXd> probe_points) {
    const auto analytic = dict.analytic_kappa();
    if (!analytic && probe_points.empty()) {
        throw ConfigError("kappa_bound: empty probe set for a dictionary without an analytic kappa");
    }
    double best = analytic.value_or(0.0);
    if (dict.is_finite()) {
        for (const auto& x : probe_points) {
            best = std::max(best, dict.feature_energy({x.data(), static_cast<std::size_t>(x.size())}));
        }
    }
    if (!(best > 0.0)) throw ConfigError("kappa_bound: all features vanish on the probe set");
    return best;
}

double kappa_bound(const Dictionary& dict, const Eigen::MatrixXd& probe_rows) {
    std::vector<Eigen::VectorXd> probes;
    probes.reserve(static_cast<std::size_t>(probe_rows.rows()));
    for (Eigen::Index i = 0; i < probe_rows.rows(); ++i) probes.emplace_back(probe_rows.row(i).transpose());
    return kappa_bound(dict, probes);
}

}  // namespace enetfp
