// Monte Carlo checks of the per-operation sampling behavior at moderate
// scale. Seeds are pinned so runs are deterministic; the acceptance
// suite repeats the distributional checks at full scale.
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dirate/estimators.hpp"
#include "dirate/experiments.hpp"
#include "dirate/inference.hpp"
#include "dirate/model_zoo.hpp"
#include "dirate/rng.hpp"
#include "support/oracles.hpp"

using namespace dirate;

TEST_CASE("2n * plugin_mi on an i.i.d. uniform chain has mean near (m-1)^2") {
    const int m = 2;
    const std::int64_t n = 100000;
    const int trials = 500;
    auto model = iid_uniform_univariate_model(m);

    std::vector<double> stats(trials);
    parallel_for_trials(trials, 0, [&](std::int64_t t) {
        auto est = plugin_mi(simulate(model, n, split_seed(2001, t)));
        stats[static_cast<std::size_t>(t)] = 2.0 * static_cast<double>(est.n) * est.i_hat;
    });
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= trials;

    const double dof = static_cast<double>(dof_mi(m));
    CHECK(std::abs(mean - dof) < 0.2 * dof);
}

TEST_CASE("2n * plugin_di on independent chains has mean near the dof") {
    auto model = product_model(random_positive_univariate_model(1, 2, 41),
                               random_positive_univariate_model(1, 2, 42));
    const std::int64_t n = 10000;
    const int trials = 500;

    std::vector<double> stats(trials);
    parallel_for_trials(trials, 0, [&](std::int64_t t) {
        auto est = plugin_di(simulate(model, n, split_seed(2002, t)));
        stats[static_cast<std::size_t>(t)] = 2.0 * static_cast<double>(est.n) * est.i_hat;
    });
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= trials;

    CHECK(std::abs(mean - 6.0) < 0.2 * 6.0);
}

TEST_CASE("plugin_di converges to log 2 on the copy mechanism") {
    auto est = plugin_di(simulate(copy_model(), 100000, 3003));
    CHECK(std::abs(est.i_hat - std::log(2.0)) < 0.01);
}

TEST_CASE("pearson statistic on independent uniform pairs has mean near (m-1)(ell-1)") {
    auto model = product_model(iid_uniform_univariate_model(2), iid_uniform_univariate_model(2));
    const std::int64_t n = 10000;
    const int trials = 500;

    std::vector<double> stats(trials);
    parallel_for_trials(trials, 0, [&](std::int64_t t) {
        stats[static_cast<std::size_t>(t)] =
            pearson_chi_sq(simulate(model, n, split_seed(2004, t)));
    });
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= trials;
    CHECK(std::abs(mean - 1.0) < 0.2);
}

TEST_CASE("sigma_sq_mi agrees with the batch-means oracle") {
    UnivariateMarkovModel model(1, Alphabet{2}, {0.9, 0.1, 0.2, 0.8}, {0.5, 0.5});
    double exact = sigma_sq_mi(model);
    double mc = oracle::batch_means_sigma_sq_mi(model, 1000000, 200, 24);
    CHECK(std::abs(mc - exact) / exact < 0.05);
}

TEST_CASE("sigma_sq_di agrees with the batch-means oracle") {
    auto model = random_positive_joint_model(1, 2, 2, 29);
    double exact = sigma_sq_di(model);
    REQUIRE(exact > 0.0);
    double mc = oracle::batch_means_sigma_sq_di(model, 1000000, 200, 229664);
    CHECK(std::abs(mc - exact) / exact < 0.05);
}

TEST_CASE("the empirical block law converges to the stationary block law") {
    auto model = random_positive_joint_model(1, 2, 2, 808);
    auto law = stationary_law(model);
    auto empirical = empirical_law(count_blocks(simulate(model, 1000000, 5)));
    double tv = 0.0;
    for (std::int64_t i = 0; i < law.block_pmf.size(); ++i) {
        tv += std::abs(empirical[i] - law.block_pmf[i]);
    }
    tv /= 2.0;
    CHECK(tv < 0.01);
}

TEST_CASE("p-values are uniform under the causal null") {
    auto model = product_model(random_positive_univariate_model(1, 2, 61),
                               random_positive_univariate_model(1, 2, 62));
    const std::int64_t n = 5000;
    const int trials = 1000;

    std::vector<double> pvals(trials);
    parallel_for_trials(trials, 0, [&](std::int64_t t) {
        TestReport report = test_causality(simulate(model, n, split_seed(2005, t)), 0.05);
        pvals[static_cast<std::size_t>(t)] = report.p_value;
    });
    std::sort(pvals.begin(), pvals.end());
    double ks = ks_distance(pvals, [](double x) { return std::min(std::max(x, 0.0), 1.0); });
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("model-sigma confidence intervals cover the analytic rate") {
    auto model = random_positive_joint_model(1, 2, 2, 929);
    REQUIRE(sigma_sq_di(model) > 0.0);

    ExperimentConfig config;
    config.kind = ExperimentKind::coverage;
    config.functional = Functional::di;
    config.joint_model = model;
    config.trials = 500;
    config.n_grid = {100000};
    config.seed = 2006;
    config.level = 0.95;
    auto result = run_experiment(config);
    double coverage = 0.0;
    for (const auto& [key, value] : result.summary) {
        if (key == "coverage") coverage = value;
    }
    CHECK(coverage >= 0.92);
    CHECK(coverage <= 0.98);
}
