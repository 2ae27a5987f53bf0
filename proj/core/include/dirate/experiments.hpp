#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirate/markov.hpp"

namespace dirate {

enum class ExperimentKind {
    chi2_null,      ///< null-law conformance: KS of {2n I_hat} against chi-squared
    clt,            ///< dependent-case conformance: KS of standardized I_hat against N(0,1)
    rate_dichotomy, ///< log-log error-decay slopes over an n grid
    coverage,       ///< normal-approximation interval coverage
    identity_fuzz,  ///< exact LR identity Delta_n = 2n I_hat over random inputs
};

enum class Functional { mi, di };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::chi2_null;
    Functional functional = Functional::di;
    std::optional<JointMarkovModel> joint_model;
    std::optional<UnivariateMarkovModel> univariate_model;
    std::int64_t trials = 1;
    std::vector<std::int64_t> n_grid; ///< single entry unless rate_dichotomy
    std::uint64_t seed = 0;
    double alpha = 0.05;
    double level = 0.95; ///< coverage only
    int threads = 0;     ///< 0 = hardware concurrency
};

/// Per-trial rows plus scalar summaries. Rows are ordered by trial
/// index, so output bytes do not depend on the worker count.
struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> summary;
};

/// Runs the configured Monte Carlo experiment on a worker pool with
/// per-trial seeds derived from config.seed. Deterministic given the seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV with one header line, one row per trial, and the summary
/// appended as '# key=value' comment lines.
void write_experiment_csv(const std::string& path, const ExperimentResult& result);

std::string summary_to_json(const ExperimentResult& result);

/// Runs `body(trial)` for every trial on `threads` workers (0 =
/// hardware concurrency). Exceptions are collected and rethrown.
void parallel_for_trials(std::int64_t trials, int threads,
                         const std::function<void(std::int64_t)>& body);

/// Least-squares slope of y over x.
double regression_slope(std::span<const double> x, std::span<const double> y);

} // namespace dirate
