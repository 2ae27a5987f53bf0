#include "dirate/estimators.hpp"

#include <cmath>

#include "dirate/info.hpp"

namespace dirate {

namespace {

double clamp_estimate(double value) {
    if (value >= 0.0) return value;
    if (value >= -1e-12) return 0.0;
    throw InternalError("plug-in estimate evaluated to " + std::to_string(value));
}

} // namespace

MiEstimate plugin_mi(const PairCounts& counts) {
    DiscreteDistribution law = pair_law(counts);
    double h0 = entropy(marginalize(law, {true, false}));
    double h1 = entropy(marginalize(law, {false, true}));
    double h01 = entropy(law);
    return MiEstimate{clamp_estimate(h0 + h1 - h01), counts.n(), counts.m()};
}

MiEstimate plugin_mi(const SymbolSequence& seq) { return plugin_mi(count_pairs(seq)); }

DiEstimate plugin_di(const ContextCounts& counts) {
    const int k = counts.order();
    DiscreteDistribution law = empirical_law(counts);

    // U = newest y, V = the k+1 x symbols, W = the k older y symbols.
    std::vector<int> u{2 * k + 1};
    std::vector<int> v, w;
    for (int j = 0; j <= k; ++j) v.push_back(2 * j);
    for (int j = 0; j < k; ++j) w.push_back(2 * j + 1);
    double value = conditional_mutual_information(regroup(law, {u, v, w}));
    return DiEstimate{value, counts.n(), k, counts.m(), counts.ell()};
}

DiEstimate plugin_di(const SymbolSequencePair& pair) { return plugin_di(count_blocks(pair)); }

double max_loglik_full_mi(const PairCounts& counts) {
    DiscreteDistribution law = pair_law(counts);
    double h0 = entropy(marginalize(law, {true, false}));
    double h01 = entropy(law);
    return static_cast<double>(counts.n()) * (h0 - h01);
}

double max_loglik_null_mi(const PairCounts& counts) {
    DiscreteDistribution law = pair_law(counts);
    double h1 = entropy(marginalize(law, {false, true}));
    return -static_cast<double>(counts.n()) * h1;
}

double lr_statistic_mi(const PairCounts& counts) {
    return 2.0 * (max_loglik_full_mi(counts) - max_loglik_null_mi(counts));
}

double lr_statistic_mi(const SymbolSequence& seq) { return lr_statistic_mi(count_pairs(seq)); }

double max_loglik_full_di(const ContextCounts& counts) {
    const int k = counts.order();
    DiscreteDistribution law = empirical_law(counts);
    double h_ctx = entropy(marginalize(law, block_slots::context(k)));
    double h_block = entropy(law);
    return static_cast<double>(counts.n()) * (h_ctx - h_block);
}

double max_loglik_null_di(const ContextCounts& counts) {
    const int k = counts.order();
    DiscreteDistribution law = empirical_law(counts);
    double h_ctx = entropy(marginalize(law, block_slots::context(k)));
    double h_x_full_y_ctx = entropy(marginalize(law, block_slots::x_full_y_context(k)));
    double h_y_full = entropy(marginalize(law, block_slots::y_full(k)));
    double h_y_ctx = entropy(marginalize(law, block_slots::y_context(k)));
    return static_cast<double>(counts.n()) * (h_ctx - h_x_full_y_ctx + h_y_ctx - h_y_full);
}

double lr_statistic_di(const ContextCounts& counts) {
    return 2.0 * (max_loglik_full_di(counts) - max_loglik_null_di(counts));
}

double lr_statistic_di(const SymbolSequencePair& pair) {
    return lr_statistic_di(count_blocks(pair));
}

double pearson_chi_sq(const SymbolSequencePair& pair) {
    const int m = pair.alphabet_x().size;
    const int ell = pair.alphabet_y().size;
    const auto& x = pair.x();
    const auto& y = pair.y();
    const double n = static_cast<double>(pair.length());

    std::vector<double> joint(static_cast<std::size_t>(m) * static_cast<std::size_t>(ell), 0.0);
    std::vector<double> px(static_cast<std::size_t>(m), 0.0);
    std::vector<double> py(static_cast<std::size_t>(ell), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[static_cast<std::size_t>(x[i]) * static_cast<std::size_t>(ell) +
              static_cast<std::size_t>(y[i])] += 1.0;
        px[static_cast<std::size_t>(x[i])] += 1.0;
        py[static_cast<std::size_t>(y[i])] += 1.0;
    }
    for (double& p : joint) p /= n;
    for (double& p : px) p /= n;
    for (double& p : py) p /= n;

    double stat = 0.0;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < ell; ++b) {
            double expected = px[static_cast<std::size_t>(a)] * py[static_cast<std::size_t>(b)];
            if (expected == 0.0) continue;
            double diff = joint[static_cast<std::size_t>(a) * static_cast<std::size_t>(ell) +
                                static_cast<std::size_t>(b)] -
                          expected;
            stat += diff * diff / expected;
        }
    }
    return n * stat;
}

} // namespace dirate
