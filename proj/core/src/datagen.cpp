#include "enetfp/datagen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "enetfp/errors.hpp"

namespace enetfp {

namespace {

double factorial(int m) {
    double f = 1.0;
    for (int k = 2; k <= m; ++k) f *= k;
    return f;
}

// 53-bit uniform in [0, 1); independent of the standard library's distribution code.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_noise(const NoiseModel& noise) {
    if (!(noise.scale >= 0.0) || !std::isfinite(noise.scale)) throw ConfigError("noise: scale must be >= 0");
}

}  // namespace

double NoiseModel::sigma() const {
    check_noise(*this);
    switch (kind) {
        case NoiseKind::none: return 0.0;
        case NoiseKind::gaussian: return std::sqrt(2.0) * scale;
        case NoiseKind::bounded_uniform: return std::sqrt(2.0 / 3.0) * scale;
    }
    return 0.0;
}

double NoiseModel::L() const {
    check_noise(*this);
    return kind == NoiseKind::none ? 0.0 : scale;
}

double NoiseModel::absolute_moment(int m) const {
    if (m < 0) throw ConfigError("noise: moment order must be >= 0");
    check_noise(*this);
    switch (kind) {
        case NoiseKind::none: return m == 0 ? 1.0 : 0.0;
        case NoiseKind::gaussian:
            // E|Z|^m = 2^{m/2} Gamma((m+1)/2) / sqrt(pi)
            return std::pow(scale, m) * std::exp2(0.5 * m) * std::tgamma(0.5 * (m + 1)) / std::sqrt(std::numbers::pi);
        case NoiseKind::bounded_uniform: return std::pow(scale, m) / (m + 1);
    }
    return 0.0;
}

bool NoiseModel::satisfies_moment_condition(int m) const {
    if (m < 2) throw ConfigError("noise: the moment condition starts at m = 2");
    const double s = sigma();
    const double rhs = 0.5 * factorial(m) * s * s * std::pow(L(), m - 2);
    return absolute_moment(m) <= rhs * (1.0 + 1e-12);
}

double NoiseModel::draw(std::mt19937_64& rng) const {
    check_noise(*this);
    switch (kind) {
        case NoiseKind::none: return 0.0;
        case NoiseKind::gaussian: return std::normal_distribution<double>(0.0, scale)(rng);
        case NoiseKind::bounded_uniform: return scale * (2.0 * unit_uniform(rng) - 1.0);
    }
    return 0.0;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t cell) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ cell);
}

Eigen::MatrixXd uniform_inputs(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = unit_uniform(rng);
    }
    return x;
}

Eigen::MatrixXd noiseless_outputs(const Dictionary& dict, const Coefficients& beta_star,
                                  const Eigen::MatrixXd& inputs) {
    if (static_cast<std::size_t>(inputs.cols()) != dict.input_dim()) {
        throw DataError("inputs have dimension " + std::to_string(inputs.cols()) + ", dictionary expects " +
                        std::to_string(dict.input_dim()));
    }
    for (const auto& [id, value] : beta_star) {
        if (!dict.contains(id)) throw LookupError("beta*: feature " + to_string(id) + " is not in the dictionary");
    }
    Eigen::MatrixXd y(inputs.rows(), static_cast<Eigen::Index>(dict.output_dim()));
    std::vector<double> x(static_cast<std::size_t>(inputs.cols()));
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        for (Eigen::Index j = 0; j < inputs.cols(); ++j) x[static_cast<std::size_t>(j)] = inputs(i, j);
        y.row(i) = predict(dict, beta_star, x).transpose();
    }
    return y;
}

Dataset generate_dataset(const GeneratorSpec& spec) {
    if (!spec.dict) throw ConfigError("generator: no dictionary");
    check_noise(spec.noise);
    Dataset data;
    if (spec.input_law == InputLaw::provided) {
        if (spec.provided_inputs.rows() == 0) throw ConfigError("generator: provided input law without inputs");
        data.inputs = spec.provided_inputs;
    } else {
        if (spec.n == 0) throw ConfigError("generator: n must be positive");
        std::mt19937_64 input_rng(derive_seed(spec.seed, 0));
        data.inputs = uniform_inputs(spec.n, spec.dict->input_dim(), input_rng);
    }
    data.outputs = noiseless_outputs(*spec.dict, spec.beta_star, data.inputs);
    std::mt19937_64 noise_rng(derive_seed(spec.seed, 1));
    for (Eigen::Index i = 0; i < data.outputs.rows(); ++i) {
        for (Eigen::Index r = 0; r < data.outputs.cols(); ++r) data.outputs(i, r) += spec.noise.draw(noise_rng);
    }
    return data;
}

CollinearDesign collinear_design(std::size_t n, double theta, const NoiseModel& noise, std::uint64_t seed,
                                 double response_scale) {
    if (!(theta >= 0.0) || !(theta < std::numbers::pi / 2.0)) {
        throw ConfigError("collinear design: theta must lie in [0, pi/2)");
    }
    if (n == 0) throw ConfigError("collinear design: n must be positive");
    check_noise(noise);
    const double slope = std::tan(theta);

    std::vector<ExplicitFeature> features;
    features.push_back({[](std::span<const double> x) { return Eigen::VectorXd::Constant(1, x[0]); }, 1.0, "x"});
    features.push_back(
        {[slope](std::span<const double> x) { return Eigen::VectorXd::Constant(1, slope * x[0]); }, 1.0, "tan*x"});

    CollinearDesign out;
    out.theta = theta;
    // Inputs live in [0, 1], so k(x) = x^2 (1 + tan^2) <= 1 + tan^2.
    out.dict = std::make_shared<ExplicitDictionary>(1, 1, std::move(features), 1.0 + slope * slope);

    std::mt19937_64 input_rng(derive_seed(seed, 0));
    std::mt19937_64 noise_rng(derive_seed(seed, 1));
    out.data.inputs = uniform_inputs(n, 1, input_rng);
    out.data.outputs.resize(static_cast<Eigen::Index>(n), 1);
    for (Eigen::Index i = 0; i < out.data.inputs.rows(); ++i) {
        out.data.outputs(i, 0) = response_scale * out.data.inputs(i, 0) + noise.draw(noise_rng);
    }
    return out;
}

}  // namespace enetfp
