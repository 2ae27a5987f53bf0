// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// any fails. Monte Carlo runs use pinned seeds so the suite is
// deterministic; scales and tolerances are fixed in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dirate/estimators.hpp"
#include "dirate/experiments.hpp"
#include "dirate/inference.hpp"
#include "dirate/model_zoo.hpp"
#include "dirate/rng.hpp"
#include "support/oracles.hpp"

using namespace dirate;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& details) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                details.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double summary_of(const ExperimentResult& result, const std::string& key) {
    for (const auto& [k, v] : result.summary) {
        if (k == key) return v;
    }
    throw std::runtime_error("missing summary key: " + key);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
    return buffer;
}

JointMarkovModel independent_chains_model() {
    return product_model(random_positive_univariate_model(1, 2, 7),
                         random_positive_univariate_model(1, 2, 8));
}

// 1. Exact likelihood-ratio identity Delta_n = 2n * I_hat for both
//    functionals over 1000 fuzzed inputs each, within 1e-9 relative,
//    in under a minute.
void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.kind = ExperimentKind::identity_fuzz;
    config.trials = 1000;
    config.seed = 424242;
    auto result = run_experiment(config);
    double max_mi = summary_of(result, "max_rel_dev_mi");
    double max_di = summary_of(result, "max_rel_dev_di");
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = max_mi < 1e-9 && max_di < 1e-9 && seconds < 60.0;
    report(1, "exact LR identity, 1000 fuzzed inputs per functional", pass,
           fmt("max rel dev mi=%.3g, di=%.3g, %.1f s", max_mi, max_di, seconds));
}

// 2. Null law of the causality statistic: KS of {2n I_hat} against
//    chi-squared(6) under two independent ergodic chains.
void criterion_2() {
    ExperimentConfig config;
    config.kind = ExperimentKind::chi2_null;
    config.functional = Functional::di;
    config.joint_model = independent_chains_model();
    config.trials = 2000;
    config.n_grid = {10000};
    config.seed = 101;
    auto result = run_experiment(config);
    double ks = summary_of(result, "ks_distance");
    double critical = summary_of(result, "ks_critical_1pct");
    report(2, "chi-squared null law, directed information", ks < critical,
           fmt("KS=%.4f < %.4f, mean statistic=%.2f", ks, critical,
               summary_of(result, "mean_statistic")));
}

// 3. Null law of the independence statistic: KS against chi-squared(1)
//    under an i.i.d. uniform chain.
void criterion_3() {
    ExperimentConfig config;
    config.kind = ExperimentKind::chi2_null;
    config.functional = Functional::mi;
    config.univariate_model = iid_uniform_univariate_model(2);
    config.trials = 2000;
    config.n_grid = {10000};
    config.seed = 201;
    auto result = run_experiment(config);
    double ks = summary_of(result, "ks_distance");
    double critical = summary_of(result, "ks_critical_1pct");
    report(3, "chi-squared null law, mutual information", ks < critical,
           fmt("KS=%.4f < %.4f", ks, critical));
}

// 4. Gaussian law in the dependent case: sqrt(n)(I_hat - I*)/sigma
//    against N(0,1) for fixed strictly positive models, both functionals.
void criterion_4() {
    ExperimentConfig di;
    di.kind = ExperimentKind::clt;
    di.functional = Functional::di;
    di.joint_model = random_positive_joint_model(1, 2, 2, 29);
    di.trials = 1000;
    di.n_grid = {100000};
    di.seed = 301;
    auto rdi = run_experiment(di);

    ExperimentConfig mi;
    mi.kind = ExperimentKind::clt;
    mi.functional = Functional::mi;
    mi.univariate_model =
        UnivariateMarkovModel(1, Alphabet{2}, {0.9, 0.1, 0.2, 0.8}, {0.5, 0.5});
    mi.trials = 1000;
    mi.n_grid = {100000};
    mi.seed = 351;
    auto rmi = run_experiment(mi);

    double ks_di = summary_of(rdi, "ks_distance");
    double ks_mi = summary_of(rmi, "ks_distance");
    double critical = summary_of(rdi, "ks_critical_1pct");
    report(4, "Gaussian law for dependent chains (mi and di)",
           ks_di < critical && ks_mi < critical,
           fmt("KS di=%.4f, mi=%.4f, critical=%.4f", ks_di, ks_mi, critical));
}

// 5. Poisson-equation variances agree with batch-means Monte Carlo
//    (n=1e6, 200 batches) within 5% for five random positive models each.
void criterion_5() {
    const std::uint64_t mi_seeds[] = {1, 2, 4, 22, 40};
    const std::uint64_t di_seeds[] = {12, 13, 25, 29, 38};
    auto bm_seed = [](std::uint64_t model_seed) { return model_seed * 7919 + 13; };

    double worst = 0.0;
    bool pass = true;
    for (std::uint64_t s : mi_seeds) {
        auto model = random_positive_univariate_model(1, 2, s);
        double exact = sigma_sq_mi(model);
        double mc = oracle::batch_means_sigma_sq_mi(model, 1000000, 200, bm_seed(s));
        double rel = std::abs(mc - exact) / exact;
        worst = std::max(worst, rel);
        pass = pass && rel < 0.05;
    }
    for (std::uint64_t s : di_seeds) {
        auto model = random_positive_joint_model(1, 2, 2, s);
        double exact = sigma_sq_di(model);
        double mc = oracle::batch_means_sigma_sq_di(model, 1000000, 200, bm_seed(s));
        double rel = std::abs(mc - exact) / exact;
        worst = std::max(worst, rel);
        pass = pass && rel < 0.05;
    }
    report(5, "sigma^2 vs batch-means oracle, 5 models per functional", pass,
           fmt("worst relative deviation %.4f < 0.05", worst));
}

// 6. Zero-variance dichotomy for doubly stochastic chains: exactly the
//    i.i.d. uniform chain degenerates.
void criterion_6() {
    double uniform2 = sigma_sq_mi(iid_uniform_univariate_model(2));
    double uniform4 = sigma_sq_mi(iid_uniform_univariate_model(4));
    bool pass = uniform2 < 1e-10 && uniform4 < 1e-10;
    double smallest = 1e300;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto model = random_doubly_stochastic_model(3, seed);
        if (!is_doubly_stochastic(model)) pass = false;
        double s2 = sigma_sq_mi(model);
        smallest = std::min(smallest, s2);
        pass = pass && s2 > 1e-6;
    }
    report(6, "zero variance iff i.i.d. uniform (doubly stochastic family)", pass,
           fmt("uniform: %.2g, smallest non-i.i.d.: %.3g", std::max(uniform2, uniform4),
               smallest));
}

// 7. Rate dichotomy: mean |I_hat - I*| decays like n^{-1/2} when the
//    rate is positive; mean I_hat itself decays like n^{-1} under the null.
void criterion_7() {
    std::vector<std::int64_t> grid;
    for (int j = 10; j <= 20; ++j) grid.push_back(std::int64_t{1} << j);

    ExperimentConfig causal;
    causal.kind = ExperimentKind::rate_dichotomy;
    causal.functional = Functional::di;
    causal.joint_model = random_positive_joint_model(1, 2, 2, 29);
    causal.trials = 200;
    causal.n_grid = grid;
    causal.seed = 777;
    double slope_causal = summary_of(run_experiment(causal), "slope_mean_abs_err");

    ExperimentConfig null_case = causal;
    null_case.joint_model = independent_chains_model();
    null_case.seed = 778;
    double slope_null = summary_of(run_experiment(null_case), "slope_mean_estimate");

    bool pass = std::abs(slope_causal + 0.5) < 0.1 && std::abs(slope_null + 1.0) < 0.15;
    report(7, "rate dichotomy over n = 2^10..2^20", pass,
           fmt("causal slope %.3f (-0.5 +/- 0.1), null slope %.3f (-1 +/- 0.15)", slope_causal,
               slope_null));
}

// 8. Consistency against the analytic oracle at n = 1e6.
void criterion_8() {
    struct Case {
        const char* name;
        JointMarkovModel model;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    cases.push_back({"copy", copy_model(), 11});
    cases.push_back({"rnd-a", random_positive_joint_model(1, 2, 2, 29), 12});
    cases.push_back({"rnd-b", random_positive_joint_model(1, 2, 2, 42), 13});
    cases.push_back({"rnd-c", random_positive_joint_model(2, 2, 2, 77), 14});

    double worst = 0.0;
    bool pass = true;
    for (const auto& c : cases) {
        double rate = analytic_di_rate(c.model);
        double est = plugin_di(simulate(c.model, 1000000, c.seed)).i_hat;
        double diff = std::abs(est - rate);
        worst = std::max(worst, diff);
        pass = pass && diff < 0.005;
    }
    report(8, "plug-in consistency at n=1e6 (copy + 3 random models)", pass,
           fmt("worst |I_hat - I*| = %.2g < 0.005", worst));
}

// 9. Test calibration: size close to alpha under the null, full power
//    against the copy mechanism.
void criterion_9() {
    auto null_model = independent_chains_model();
    const int trials = 1000;
    std::vector<int> flags(trials, 0);
    parallel_for_trials(trials, 0, [&](std::int64_t t) {
        auto pair = simulate(null_model, 10000, split_seed(903, t));
        flags[static_cast<std::size_t>(t)] = test_causality(pair, 0.05).reject ? 1 : 0;
    });
    int rejects = 0;
    for (int f : flags) rejects += f;
    double rate = static_cast<double>(rejects) / trials;

    auto copy = copy_model();
    const int power_trials = 200;
    std::vector<int> power_flags(power_trials, 0);
    parallel_for_trials(power_trials, 0, [&](std::int64_t t) {
        auto pair = simulate(copy, 10000, split_seed(904, t));
        power_flags[static_cast<std::size_t>(t)] = test_causality(pair, 0.05).reject ? 1 : 0;
    });
    int power_rejects = 0;
    for (int f : power_flags) power_rejects += f;
    double power = static_cast<double>(power_rejects) / power_trials;

    bool pass = rate >= 0.03 && rate <= 0.07 && power == 1.0;
    report(9, "test calibration: size in [0.03, 0.07], power 1.0", pass,
           fmt("null rejection rate %.3f, power %.3f", rate, power));
}

// 10. Special functions: closed forms and the quadrature oracle.
void criterion_10() {
    double worst_exp = 0.0;
    for (double x = 0.0; x <= 50.0; x += 0.125) {
        worst_exp = std::max(worst_exp, std::abs(chi_sq_sf(x, 2) - std::exp(-x / 2.0)));
    }
    double quantile_err = std::abs(normal_quantile(0.975) - 1.959964);
    double quad_err = std::abs(chi_sq_sf(6.0, 6) - oracle::chi_sq_sf_quadrature(6.0, 6));
    bool pass = worst_exp < 1e-12 && quantile_err < 1e-6 && quad_err < 1e-9;
    report(10, "special functions: exp identity, normal quantile, quadrature", pass,
           fmt("exp id %.2g, quantile %.2g, quadrature %.2g", worst_exp, quantile_err,
               quad_err));
}

} // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 10 criteria passed in %.1f s\n", 10 - failures, seconds);
    return failures == 0 ? 0 : 1;
}
