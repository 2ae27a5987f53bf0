#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirate/markov.hpp"
#include "dirate/sequences.hpp"

namespace dirate {

/// Degrees of freedom of the independence test: (m-1)^2.
std::int64_t dof_mi(int m);

/// Degrees of freedom of the causality test: ell^k (m^{k+1} - 1)(ell - 1).
/// Integer arithmetic is overflow-checked.
std::int64_t dof_di(int m, int ell, int k);

/// Survival function of the chi-squared distribution, via the
/// regularized incomplete gamma function (series below dof+1 in x,
/// continued fraction above). Absolute error below 1e-10.
double chi_sq_sf(double x, std::int64_t dof);
double chi_sq_cdf(double x, std::int64_t dof);

double normal_cdf(double x);

/// Standard normal quantile: rational approximation refined by one
/// Halley step against the erf-based CDF. Absolute error below 1e-8.
double normal_quantile(double p);

/// Kolmogorov-Smirnov sup distance between the empirical CDF of
/// `sorted_samples` (ascending) and `cdf`.
double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)>& cdf);

struct TestReport {
    double estimate = 0.0;  ///< plug-in value, nats
    double statistic = 0.0; ///< Delta_n
    std::int64_t dof = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject = false;
    std::int64_t n = 0;
    int k = 0;
    int m = 0;
    int ell = 0;
    std::optional<double> sigma_hat;
    std::vector<std::string> warnings;
};

/// Likelihood-ratio test of "X has no causal influence on Y" within the
/// order-k joint Markov family. Rejects when the chi-squared tail
/// probability of Delta_n falls below alpha.
TestReport test_causality(const SymbolSequencePair& pair, double alpha);

/// Likelihood-ratio test of serial independence within the first-order
/// Markov family.
TestReport test_independence_markov(const SymbolSequence& seq, double alpha);

struct ConfidenceInterval {
    double center = 0.0;
    double half_width = 0.0;
    double level = 0.0;
    double sigma_hat = 0.0;
    std::vector<std::string> warnings;
};

/// Normal-approximation interval for the directed information rate:
/// plugin_di +/- z * sigma / sqrt(n). With a model, sigma comes from the
/// exact Poisson-equation variance of that model; without one it is the
/// plug-in completion (variance of the fitted transition matrix), which
/// requires the fitted chain to be ergodic.
ConfidenceInterval confidence_interval_di(const SymbolSequencePair& pair, double level,
                                          const JointMarkovModel* model = nullptr);

std::string report_to_json(const TestReport& report);

} // namespace dirate
