#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>

#include "enetfp/dictionary.hpp"
#include "enetfp/feature_id.hpp"
#include "enetfp/operators.hpp"

namespace enetfp {

enum class NoiseKind { none, gaussian, bounded_uniform };

/// Additive noise law with one admissible (sigma, L) pair for the
/// sub-exponential moment condition E|W|^m <= m!/2 sigma^2 L^{m-2}.
///   gaussian(sd s):          L = s, sigma^2 = 2 s^2
///   bounded_uniform([-c,c]): L = c, sigma^2 = 2 c^2 / 3
struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double scale = 0.0;

    double sigma() const;
    double L() const;

    /// E|W|^m, exact.
    double absolute_moment(int m) const;

    /// E|W|^m <= m!/2 sigma^2 L^{m-2}.
    bool satisfies_moment_condition(int m) const;

    double draw(std::mt19937_64& rng) const;
};

enum class InputLaw { uniform, provided };

struct GeneratorSpec {
    std::shared_ptr<const Dictionary> dict;
    Coefficients beta_star;
    std::size_t n = 1;
    InputLaw input_law = InputLaw::uniform;
    Eigen::MatrixXd provided_inputs;  // used when input_law == provided
    NoiseModel noise;
    std::uint64_t seed = 0;
};

/// splitmix64-based mixing of (seed, cell): the per-cell seed contract.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t cell);

/// n x d matrix of i.i.d. uniform[0,1] entries.
Eigen::MatrixXd uniform_inputs(std::size_t n, std::size_t d, std::mt19937_64& rng);

/// Y_i = f_{beta*}(X_i) + W_i. Bit-identical for identical specs.
Dataset generate_dataset(const GeneratorSpec& spec);

/// Noiseless outputs f_{beta*}(X_i) for the given inputs.
Eigen::MatrixXd noiseless_outputs(const Dictionary& dict, const Coefficients& beta_star,
                                  const Eigen::MatrixXd& inputs);

struct CollinearDesign {
    Dataset data;
    std::shared_ptr<ExplicitDictionary> dict;
    double theta = 0.0;
};

/// Two features phi_1(x) = x, phi_2(x) = tan(theta) x on uniform inputs,
/// weights 1, response Y = response_scale * x + W (fixed as theta tilts).
/// Throws ConfigError unless theta in [0, pi/2).
CollinearDesign collinear_design(std::size_t n, double theta, const NoiseModel& noise,
                                 std::uint64_t seed, double response_scale = 2.0);

}  // namespace enetfp
