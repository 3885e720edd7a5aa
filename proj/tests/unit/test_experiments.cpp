#include <cmath>
#include <numbers>

#include "doctest.h"
#include "enetfp/io.hpp"
#include "testing.hpp"

using namespace enetfp;

TEST_CASE("quartiles and spearman") {
    const auto q = quartiles({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(q.median == 3.0);
    CHECK(q.q1 == 2.0);
    CHECK(q.q3 == 4.0);
    CHECK(quartiles({1.0, 2.0}).median == 1.5);
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman({1, 2, 3}, {1, 1, 2}) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("fingerprint is stable") {
    CHECK(fingerprint("") == "cbf29ce484222325");
    CHECK(fingerprint("abc") == fingerprint("abc"));
    CHECK(fingerprint("abc") != fingerprint("abd"));
}

TEST_CASE("instability sweep excludes pi/4") {
    InstabilitySpec spec;
    const auto thetas = spec.sweep();
    CHECK(thetas.size() == 10);
    for (double t : thetas) CHECK(std::abs(t - std::numbers::pi / 4) >= 0.01 - 1e-15);
}

TEST_CASE("instability demo behaviour") {
    InstabilitySpec spec;
    spec.seeds = {1, 2, 3};
    spec.threads = 1;
    const auto report = run_instability_demo(spec);
    CHECK(report.cells.size() == 10 * 2 * 3);
    CHECK(report.summary.at("window_exists[eps=1]") == 1.0);
    CHECK(report.summary.at("window_exists[eps=1e-06]") == 0.0);

    // Well above the window only the steeper feature survives.
    InstabilitySpec top = spec;
    top.thetas = {1.2};
    const auto r = run_instability_demo(top);
    for (const auto& cell : r.cells) {
        CHECK(cell.metrics.at("beta1") == 0.0);
        CHECK(cell.metrics.at("beta2") > 0.0);
    }
}

TEST_CASE("symmetric data at pi/4 splits evenly") {
    const auto d = collinear_design(50, std::numbers::pi / 4, {NoiseKind::none, 0.0}, 3);
    SolverConfig cfg;
    cfg.epsilon = 1.0;
    cfg.lambda = 0.1;
    cfg.kappa = 2.0;
    cfg.target_accuracy = 1e-12;
    const auto ids = d.dict->enumerate();
    const auto r = solve(assemble_empirical(*d.dict, d.data, ids, 1), cfg, weights_of(*d.dict));
    CHECK(r.beta.at(ids[0]) == doctest::Approx(r.beta.at(ids[1])).epsilon(1e-9));
}

TEST_CASE("consistency smoke run is deterministic and roughly decreasing") {
    ConsistencySpec spec;
    spec.problem = dependent_three_problem({NoiseKind::gaussian, 0.5});
    spec.n_schedule = {100, 400};
    spec.seeds = {1, 2, 3, 4, 5};
    spec.threads = 1;
    const auto a = run_consistency(spec);
    spec.threads = 3;
    const auto b = run_consistency(spec);
    CHECK(experiment_report_json(a) == experiment_report_json(b));
    CHECK(a.cells.size() == 10);
    CHECK(a.summary.at("median_l2_error[n=400]") < a.summary.at("median_l2_error[n=100]"));
}

TEST_CASE("noiseless error is the approximation term") {
    ConsistencySpec spec;
    spec.problem = dependent_three_problem({NoiseKind::none, 0.0});
    spec.n_schedule = {1600};
    spec.rate = 0.45;
    spec.seeds = {7};
    const auto report = run_consistency(spec);
    const double lambda = std::pow(1600.0, -0.45);
    const auto dagger = problem_representation(spec.problem, 1.0, spec.oracle_sample, spec.oracle_tolerance);
    const auto population = population_minimizer(*spec.problem.dict, spec.problem.beta_star, lambda, 1.0, 2.0, 4000, 7);
    const double approx = l2_distance(population, dagger.beta);
    CHECK(report.cells.at(0).metrics.at("l2_error") == doctest::Approx(approx).epsilon(0.05));
}

TEST_CASE("adaptive choice without noise picks the grid top") {
    AdaptiveSpec spec;
    spec.problem = dependent_three_problem({NoiseKind::none, 0.0});
    spec.n_schedule = {400};
    spec.seeds = {1, 2};
    spec.grid_count = 6;
    const auto report = run_adaptive(spec);
    for (const auto& cell : report.cells) CHECK(cell.metrics.at("at_grid_top") == 1.0);
}
