#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "testing.hpp"

using namespace enetfp;

TEST_CASE("noise constants and moment condition") {
    const NoiseModel g{NoiseKind::gaussian, 0.7};
    CHECK(g.L() == doctest::Approx(0.7));
    CHECK(g.sigma() == doctest::Approx(std::sqrt(2.0) * 0.7));
    CHECK(g.absolute_moment(2) == doctest::Approx(0.49));
    CHECK(g.absolute_moment(1) == doctest::Approx(0.7 * std::sqrt(2.0 / std::numbers::pi)));
    const NoiseModel u{NoiseKind::bounded_uniform, 1.5};
    CHECK(u.absolute_moment(2) == doctest::Approx(0.75));
    for (int m = 2; m <= 12; ++m) {
        CHECK(g.satisfies_moment_condition(m));
        CHECK(u.satisfies_moment_condition(m));
    }
}

TEST_CASE("empirical noise mean is near zero") {
    for (auto kind : {NoiseKind::gaussian, NoiseKind::bounded_uniform}) {
        const NoiseModel noise{kind, 2.0};
        std::mt19937_64 rng(30);
        double sum = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) sum += noise.draw(rng);
        CHECK(std::abs(sum / draws) <= 4.0 * 2.0 / std::sqrt(static_cast<double>(draws)));
    }
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) CHECK(std::abs(NoiseModel{NoiseKind::bounded_uniform, 0.3}.draw(rng)) <= 0.3);
}

TEST_CASE("generated datasets") {
    auto haar = std::make_shared<HaarDictionary>(WaveletSpec{.max_level = 3, .smoothness = 1.0, .weight_exponent = 0.0});
    GeneratorSpec spec;
    spec.dict = haar;
    spec.beta_star = {{{0, 0}, 1.0}, {{2, 1}, -0.5}};
    spec.n = 50;
    spec.seed = 99;
    const auto clean = generate_dataset(spec);
    CHECK(clean.outputs == noiseless_outputs(*haar, spec.beta_star, clean.inputs));

    spec.noise = {NoiseKind::gaussian, 0.3};
    const auto a = generate_dataset(spec);
    const auto b = generate_dataset(spec);
    CHECK(a.inputs == b.inputs);
    CHECK(a.outputs == b.outputs);
    CHECK(a.inputs == clean.inputs);

    spec.beta_star.clear();
    const auto pure = generate_dataset(spec);
    const Eigen::MatrixXd noise = a.outputs - noiseless_outputs(*haar, {{{0, 0}, 1.0}, {{2, 1}, -0.5}}, a.inputs);
    CHECK((pure.outputs - noise).cwiseAbs().maxCoeff() <= 1e-14);

    spec.seed = 100;
    CHECK(generate_dataset(spec).inputs != a.inputs);
}

TEST_CASE("derive_seed separates cells") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
}

TEST_CASE("collinear design") {
    const auto flat = collinear_design(30, std::numbers::pi / 4, {NoiseKind::none, 0.0}, 5);
    const auto ids = flat.dict->enumerate();
    for (Eigen::Index i = 0; i < 30; ++i) {
        const double x[1] = {flat.data.inputs(i, 0)};
        CHECK(flat.dict->evaluate(ids[1], x)(0) == doctest::Approx(flat.dict->evaluate(ids[0], x)(0)).epsilon(1e-15));
    }
    const auto zero = collinear_design(30, 0.0, {NoiseKind::none, 0.0}, 5);
    for (Eigen::Index i = 0; i < 30; ++i) {
        const double x[1] = {zero.data.inputs(i, 0)};
        CHECK(zero.dict->evaluate(ids[1], x)(0) == 0.0);
    }
    for (double theta : {0.1, 0.7, 1.3}) {
        const auto d = collinear_design(40, theta, {NoiseKind::gaussian, 0.1}, 6);
        const auto ops = assemble_empirical(*d.dict, d.data, ids, 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.gram);
        CHECK(std::abs(es.eigenvalues()(0)) <= 1e-12 * es.eigenvalues()(1));
        CHECK(es.eigenvalues()(1) > 0.0);
    }
    CHECK_THROWS_AS(collinear_design(10, std::numbers::pi / 2, {NoiseKind::none, 0.0}, 1), ConfigError);
    CHECK_THROWS_AS(collinear_design(10, -0.1, {NoiseKind::none, 0.0}, 1), ConfigError);
}
