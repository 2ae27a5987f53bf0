#include "dirate/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "dirate/estimators.hpp"

namespace dirate {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ValidationError("degrees-of-freedom computation overflows int64");
    }
    return out;
}

std::int64_t checked_pow_i64(std::int64_t base, int exp) {
    std::int64_t out = 1;
    for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

constexpr int kGammaMaxIterations = 2000;
constexpr double kGammaEpsilon = 1e-16;

// Regularized lower incomplete gamma P(a, x) by series, for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kGammaMaxIterations; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kGammaEpsilon) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw InternalError("incomplete gamma series did not converge");
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction
// (modified Lentz), for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIterations; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kGammaEpsilon) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw InternalError("incomplete gamma continued fraction did not converge");
}

double gamma_p(double a, double x) {
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x) {
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

void check_dof(std::int64_t dof) {
    if (dof < 1) throw ValidationError("degrees of freedom must be >= 1");
}

std::vector<std::string> small_sample_warnings(std::int64_t n, std::int64_t dof) {
    std::vector<std::string> warnings;
    if (n < 5 * dof) {
        warnings.push_back("chi-squared approximation may be unreliable: n = " +
                           std::to_string(n) + " < 5 * dof = " + std::to_string(5 * dof));
    }
    return warnings;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("significance level must lie in (0, 1)");
    }
}

} // namespace

std::int64_t dof_mi(int m) {
    if (m < 2) throw ValidationError("independence test needs an alphabet of size >= 2");
    return static_cast<std::int64_t>(m - 1) * (m - 1);
}

std::int64_t dof_di(int m, int ell, int k) {
    if (m < 2 || ell < 2) throw ValidationError("causality test needs alphabets of size >= 2");
    if (k < 1) throw ValidationError("order k must be >= 1");
    std::int64_t lk = checked_pow_i64(ell, k);
    std::int64_t mk1 = checked_pow_i64(m, k + 1);
    return checked_mul(checked_mul(lk, mk1 - 1), ell - 1);
}

double chi_sq_sf(double x, std::int64_t dof) {
    check_dof(dof);
    if (!(x >= 0.0)) throw ValidationError("chi_sq_sf: x must be >= 0");
    return gamma_q(static_cast<double>(dof) / 2.0, x / 2.0);
}

double chi_sq_cdf(double x, std::int64_t dof) {
    check_dof(dof);
    if (!(x >= 0.0)) throw ValidationError("chi_sq_cdf: x must be >= 0");
    return gamma_p(static_cast<double>(dof) / 2.0, x / 2.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("normal_quantile: p must lie in (0, 1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement against the erf-based CDF.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)>& cdf) {
    const std::size_t n = sorted_samples.size();
    if (n == 0) throw ValidationError("ks_distance: need at least one sample");
    if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end())) {
        throw ValidationError("ks_distance: samples must be sorted ascending");
    }
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(sorted_samples[i]);
        double lo = static_cast<double>(i) / static_cast<double>(n);
        double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        dist = std::max(dist, std::max(hi - f, f - lo));
    }
    return dist;
}

TestReport test_causality(const SymbolSequencePair& pair, double alpha) {
    check_alpha(alpha);
    ContextCounts counts = count_blocks(pair);
    TestReport report;
    report.k = pair.order();
    report.m = pair.alphabet_x().size;
    report.ell = pair.alphabet_y().size;
    report.n = counts.n();
    report.alpha = alpha;
    report.estimate = plugin_di(counts).i_hat;
    report.statistic = std::max(lr_statistic_di(counts), 0.0);
    report.dof = dof_di(report.m, report.ell, report.k);
    report.p_value = chi_sq_sf(report.statistic, report.dof);
    report.reject = report.p_value < alpha;
    report.warnings = small_sample_warnings(report.n, report.dof);
    return report;
}

TestReport test_independence_markov(const SymbolSequence& seq, double alpha) {
    check_alpha(alpha);
    PairCounts counts = count_pairs(seq);
    TestReport report;
    report.k = 1;
    report.m = seq.alphabet().size;
    report.ell = 0;
    report.n = counts.n();
    report.alpha = alpha;
    report.estimate = plugin_mi(counts).i_hat;
    report.statistic = std::max(lr_statistic_mi(counts), 0.0);
    report.dof = dof_mi(report.m);
    report.p_value = chi_sq_sf(report.statistic, report.dof);
    report.reject = report.p_value < alpha;
    report.warnings = small_sample_warnings(report.n, report.dof);
    return report;
}

ConfidenceInterval confidence_interval_di(const SymbolSequencePair& pair, double level,
                                          const JointMarkovModel* model) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ValidationError("confidence level must lie in (0, 1)");
    }
    ContextCounts counts = count_blocks(pair);

    ConfidenceInterval ci;
    ci.level = level;
    ci.center = plugin_di(counts).i_hat;

    double sigma_sq = 0.0;
    if (model != nullptr) {
        sigma_sq = sigma_sq_di(*model);
    } else {
        JointMarkovModel fitted = fit_joint_model(counts);
        if (!is_ergodic(fitted)) {
            throw ValidationError(
                "fitted transition matrix is not ergodic; use a larger sample or pass an "
                "explicit model");
        }
        sigma_sq = sigma_sq_di(fitted);
        ci.warnings.push_back("sigma estimated by plug-in from the fitted transition matrix");
    }
    ci.sigma_hat = std::sqrt(sigma_sq);
    if (sigma_sq == 0.0) {
        ci.half_width = 0.0;
        ci.warnings.push_back("degenerate limit: sigma is 0, interval has zero width");
    } else {
        double z = normal_quantile((1.0 + level) / 2.0);
        ci.half_width = z * ci.sigma_hat / std::sqrt(static_cast<double>(counts.n()));
    }
    return ci;
}

std::string report_to_json(const TestReport& report) {
    nlohmann::ordered_json doc;
    doc["estimate_nats"] = report.estimate;
    doc["statistic"] = report.statistic;
    doc["dof"] = report.dof;
    doc["p_value"] = report.p_value;
    doc["alpha"] = report.alpha;
    doc["decision"] = report.reject ? "reject" : "retain";
    doc["n"] = report.n;
    doc["k"] = report.k;
    doc["m"] = report.m;
    doc["ell"] = report.ell;
    if (report.sigma_hat.has_value()) {
        doc["sigma_hat"] = *report.sigma_hat;
    } else {
        doc["sigma_hat"] = nullptr;
    }
    doc["warnings"] = report.warnings;
    return doc.dump(2);
}

} // namespace dirate
