#include <cmath>
#include <random>

#include "doctest.h"
#include "testing.hpp"

using namespace enetfp;

TEST_CASE("single linear feature on two points") {
    auto lin = linear_dictionary(1);
    Dataset data;
    data.inputs = Eigen::MatrixXd(2, 1);
    data.inputs << 1.0, -1.0;
    data.outputs = Eigen::MatrixXd(2, 1);
    data.outputs << 2.0, -2.0;
    const auto ids = lin->enumerate();
    const auto ops = assemble_empirical(*lin, data, ids, 1);
    CHECK(ops.gram(0, 0) == 1.0);
    CHECK(ops.moment(0) == 2.0);
    CHECK(ops.y_norm == doctest::Approx(2.0));
    CHECK(ops.trace == 1.0);
}

TEST_CASE("duplicated features give a rank-one gram") {
    auto id = [](std::span<const double> x) { return Eigen::VectorXd::Constant(1, x[0] * 3.0 - 1.0); };
    ExplicitDictionary dup(1, 1, {{id, 1.0, "a"}, {id, 1.0, "b"}});
    std::mt19937_64 rng(1);
    Dataset data;
    data.inputs = enetfp::uniform_inputs(40, 1, rng);
    data.outputs = Eigen::MatrixXd::Random(40, 1);
    const auto ops = assemble_empirical(dup, data, dup.enumerate(), 1);
    CHECK(ops.gram(0, 0) == ops.gram(0, 1));
    CHECK(ops.gram(1, 0) == ops.gram(1, 1));
    CHECK(ops.gram(0, 0) == ops.gram(1, 1));
    CHECK(smallest_eigenvalue(ops) <= 1e-12);
}

TEST_CASE("assembly agrees with direct loops on random designs") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = testing::random_instance(rng, testing::uniform_int(rng, 5, 60), testing::uniform_int(rng, 1, 12));
        auto lin = linear_dictionary(static_cast<std::size_t>(inst.design.cols()));
        const auto ids = lin->enumerate();
        const auto ops = assemble_empirical(*lin, testing::dataset_of(inst), ids, 2);
        CHECK((ops.gram - inst.ops.gram).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((ops.moment - inst.ops.moment).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(ops.y_norm == doctest::Approx(inst.ops.y_norm).epsilon(1e-14));
        CHECK(ops.gram.isApprox(ops.gram.transpose(), 0.0));
    }
}

TEST_CASE("haar gram trace stays below kappa") {
    HaarDictionary haar({.max_level = 1, .smoothness = 1.0, .weight_exponent = 0.0});
    std::mt19937_64 rng(4);
    Dataset data;
    data.inputs = uniform_inputs(100, 1, rng);
    data.outputs = Eigen::MatrixXd::Zero(100, 1);
    const auto ids = haar.enumerate();
    const auto ops = assemble_empirical(haar, data, ids, 1);
    double energy = 0.0;
    for (Eigen::Index i = 0; i < 100; ++i) {
        const double x[1] = {data.inputs(i, 0)};
        energy += haar.feature_energy(x);
    }
    CHECK(ops.trace == doctest::Approx(energy / 100.0).epsilon(1e-13));
    CHECK(ops.trace <= HaarDictionary::series_kappa(1.0));
}

TEST_CASE("assembly does not depend on the worker count or on sample order") {
    HaarDictionary haar({.max_level = 4, .smoothness = 1.0, .weight_exponent = 0.0});
    std::mt19937_64 rng(5);
    Dataset data;
    data.inputs = uniform_inputs(64, 1, rng);
    data.outputs = Eigen::MatrixXd::Random(64, 1);
    const auto ids = haar.enumerate();
    const auto a = assemble_empirical(haar, data, ids, 1);
    const auto b = assemble_empirical(haar, data, ids, 4);
    CHECK(a.gram == b.gram);
    CHECK(a.moment == b.moment);

    Dataset shuffled = data;
    for (Eigen::Index i = 0; i < 64; ++i) {
        shuffled.inputs.row(i) = data.inputs.row(63 - i);
        shuffled.outputs.row(i) = data.outputs.row(63 - i);
    }
    const auto c = assemble_empirical(haar, shuffled, ids, 1);
    CHECK((a.gram - c.gram).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((a.moment - c.moment).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("dimension mismatch is rejected") {
    auto lin = linear_dictionary(2);
    Dataset data;
    data.inputs = Eigen::MatrixXd::Ones(3, 2);
    data.outputs = Eigen::MatrixXd::Ones(3, 2);
    const auto ids = lin->enumerate();
    CHECK_THROWS_AS(assemble_empirical(*lin, data, ids, 1), DataError);
    data.outputs = Eigen::MatrixXd::Ones(2, 1);
    CHECK_THROWS_AS(assemble_empirical(*lin, data, ids, 1), DataError);
}

TEST_CASE("predict and kernel") {
    auto lin = linear_dictionary(1);
    const double half[1] = {0.5};
    CHECK(predict(*lin, {{{0, 0}, 1.0}}, half)(0) == 0.5);
    CHECK(predict(*lin, {}, half)(0) == 0.0);

    HaarDictionary haar({.max_level = 3, .smoothness = 1.0, .weight_exponent = 0.0});
    const double x[1] = {0.9};
    CHECK(predict(haar, {{{0, 0}, 2.0}}, x)(0) == doctest::Approx(2.0));

    ExplicitDictionary one(1, 1, {{[](std::span<const double> v) { return Eigen::VectorXd::Constant(1, v[0]); }, 1.0, "x"}});
    const double two[1] = {2.0};
    const double three[1] = {3.0};
    CHECK(kernel_eval(one, two, three)(0, 0) == doctest::Approx(6.0));
    ExplicitDictionary empty(1, 1, {});
    CHECK(kernel_eval(empty, two, three)(0, 0) == 0.0);
    CHECK(kernel_eval(haar, x, x)(0, 0) <= 3.0);
}

TEST_CASE("predict is linear in beta") {
    HaarDictionary haar({.max_level = 4, .smoothness = 1.0, .weight_exponent = 0.0});
    const auto ids = haar.enumerate();
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        Coefficients a, b, combo;
        const double s = testing::uniform(rng, -2, 2);
        for (const auto& id : ids) {
            a[id] = testing::uniform(rng, -1, 1);
            b[id] = testing::uniform(rng, -1, 1);
            combo[id] = a[id] + s * b[id];
        }
        const double x[1] = {testing::uniform(rng, 0, 1)};
        const double lhs = predict(haar, combo, x)(0);
        const double rhs = predict(haar, a, x)(0) + s * predict(haar, b, x)(0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("dense and sparse conversions") {
    const auto ids = testing::linear_ids(3);
    Eigen::VectorXd v(3);
    v << 1.0, 0.0, -2.0;
    const auto sparse = from_dense(v, ids);
    CHECK(sparse.size() == 2);
    CHECK(to_dense(sparse, ids) == v);
    CHECK_THROWS_AS(to_dense({{{0, 7}, 1.0}}, ids), LookupError);
    CHECK(l2_norm(sparse) == doctest::Approx(std::sqrt(5.0)));
    CHECK(l2_distance(sparse, {{{0, 0}, 1.0}}) == doctest::Approx(2.0));
}
