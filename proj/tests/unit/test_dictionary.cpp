#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "testing.hpp"

using namespace enetfp;

namespace {

double at(const Dictionary& d, FeatureId id, double x) {
    const double xs[1] = {x};
    return d.evaluate(id, xs)(0);
}

}  // namespace

TEST_CASE("haar scaling function and first wavelet") {
    HaarDictionary haar({.max_level = 3, .smoothness = 1.0, .weight_exponent = 0.0});
    CHECK(at(haar, {0, 0}, 0.3) == doctest::Approx(1.0));
    CHECK(at(haar, {1, 0}, 0.3) == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(at(haar, {0, 1}, 0.25) == 1.0);
    CHECK(at(haar, {0, 1}, 0.75) == -1.0);
    // x = 1 belongs to the last interval
    CHECK(at(haar, {0, 1}, 1.0) == -1.0);
}

TEST_CASE("haar enumeration and weights") {
    HaarDictionary j0({.max_level = 0, .smoothness = 1.0, .weight_exponent = 0.0});
    const auto ids = j0.enumerate();
    REQUIRE(ids.size() == 2);
    for (const auto& id : ids) CHECK(j0.weight(id) == 1.0);

    HaarDictionary j2({.max_level = 2, .smoothness = 1.0, .weight_exponent = 1.0});
    CHECK(j2.enumerate().size() == 2 + 2 + 4);
    for (std::int64_t k = 0; k < 4; ++k) CHECK(j2.weight({2, k}) == doctest::Approx(4.0));
}

TEST_CASE("haar rescaling matches the unrescaled wavelet") {
    const double s = 0.8;
    HaarDictionary haar({.max_level = 5, .smoothness = s, .weight_exponent = 0.0});
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int j = static_cast<int>(testing::uniform_int(rng, 1, 5));
        const auto k = static_cast<std::int64_t>(testing::uniform_int(rng, 0, (1u << j) - 1));
        const double x = testing::uniform(rng, 0.0, 1.0);
        const double raw = std::pow(2.0, j / 2.0) * HaarDictionary::mother(std::ldexp(x, j) - static_cast<double>(k));
        CHECK(at(haar, {j, k}, x) == doctest::Approx(std::pow(2.0, -j * s) * raw).epsilon(1e-14));
    }
}

TEST_CASE("haar errors") {
    HaarDictionary haar({.max_level = 2, .smoothness = 1.0, .weight_exponent = 0.0});
    CHECK_THROWS_AS(at(haar, {0, 0}, 1.5), DomainError);
    CHECK_THROWS_AS(at(haar, {0, 0}, -0.1), DomainError);
    CHECK_THROWS_AS(at(haar, {3, 0}, 0.5), LookupError);
    CHECK_THROWS_AS(at(haar, {1, 2}, 0.5), LookupError);
    CHECK_THROWS_AS(HaarDictionary({.max_level = 2, .smoothness = 0.5, .weight_exponent = 0.0}), ConfigError);
    HaarDictionary uncapped({.max_level = std::nullopt, .smoothness = 1.0, .weight_exponent = 1.0});
    CHECK_FALSE(uncapped.is_finite());
    CHECK_THROWS_AS(uncapped.enumerate(), ConfigError);
}

TEST_CASE("haar kappa: partial sums over 30 levels approach the series") {
    HaarDictionary haar({.max_level = 30, .smoothness = 1.0, .weight_exponent = 0.0});
    // Independent sum of squared feature values at one point, level by level.
    for (double x : {0.1, 0.5, 0.77}) {
        double sum = 0.0;
        for (int j = 0; j <= 30; ++j) {
            if (j == 0) {
                sum += 1.0 + 1.0;
                continue;
            }
            const auto k = static_cast<std::int64_t>(std::floor(std::ldexp(x, j)));
            const double v = haar.value({j, k}, x);
            sum += v * v;
        }
        CHECK(std::abs(sum - 3.0) <= 1e-6);
    }
    CHECK(HaarDictionary::series_kappa(1.0) == doctest::Approx(3.0));
    HaarDictionary uncapped({.max_level = std::nullopt, .smoothness = 1.0, .weight_exponent = 1.0});
    const std::vector<Eigen::VectorXd> none;
    CHECK(kappa_bound(uncapped, none) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("explicit dictionaries and kappa bound") {
    auto lin = linear_dictionary(1);
    const double half[1] = {0.5};
    CHECK(lin->evaluate({0, 0}, half)(0) == 0.5);

    Eigen::MatrixXd probes(2, 1);
    probes << 0.0, 1.0;
    CHECK(kappa_bound(*lin, probes) == doctest::Approx(1.0));
    CHECK_THROWS_AS(kappa_bound(*lin, Eigen::MatrixXd(0, 1)), ConfigError);

    auto one = [](std::span<const double>) { return Eigen::VectorXd::Ones(1); };
    ExplicitDictionary dup(1, 1, {{one, 1.0, "a"}, {one, 1.0, "b"}});
    Eigen::MatrixXd probe(1, 1);
    probe << 0.42;
    CHECK(kappa_bound(dup, probe) == doctest::Approx(2.0));
    CHECK_THROWS_AS(dup.weight({0, 2}), LookupError);
    CHECK_THROWS_AS(ExplicitDictionary(1, 1, {{one, -1.0, "neg"}}), ConfigError);
}

TEST_CASE("feature energy of a capped haar dictionary is bounded by the series") {
    HaarDictionary haar({.max_level = 8, .smoothness = 0.9, .weight_exponent = 0.0});
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const double x[1] = {testing::uniform(rng, 0.0, 1.0)};
        CHECK(haar.feature_energy(x) <= HaarDictionary::series_kappa(0.9) + 1e-12);
    }
}
