#pragma once

#include <cstdint>

#include "dirate/counts.hpp"
#include "dirate/sequences.hpp"

namespace dirate {

struct MiEstimate {
    double i_hat; ///< nats, in [0, log m]
    std::int64_t n;
    int m;
};

struct DiEstimate {
    double i_hat; ///< nats, in [0, log ell]
    std::int64_t n;
    int k;
    int m;
    int ell;
};

/// Plug-in mutual information of consecutive pairs: the two-slot
/// empirical pair law evaluated as H(X_0) + H(X_1) - H(X_0, X_1).
/// X_0 and X_1 are the two coordinate marginals of the pair law
/// (shifted windows over the sample); they differ at the endpoints and
/// are deliberately not pooled — the exact likelihood-ratio identity
/// below needs them as-is.
MiEstimate plugin_mi(const SymbolSequence& seq);
MiEstimate plugin_mi(const PairCounts& counts);

/// Plug-in conditional mutual information I(Y_new; X-block | Y-context)
/// of the empirical (k+1)-block law — the directed-information-rate
/// estimator for memory k.
DiEstimate plugin_di(const SymbolSequencePair& pair);
DiEstimate plugin_di(const ContextCounts& counts);

/// Maximized log-likelihood over all first-order transition matrices:
/// n [H(X_0-marginal) - H(pair law)].
double max_loglik_full_mi(const PairCounts& counts);

/// Maximized log-likelihood of the i.i.d. null: -n H(X_1-marginal).
/// The fitted null law is the empirical distribution of the visited
/// symbols X_1..X_n, i.e. the newest-coordinate marginal; using the
/// older-coordinate marginal would break the exact Delta_n = 2n I_hat
/// identity at the endpoints.
double max_loglik_null_mi(const PairCounts& counts);

/// Likelihood-ratio statistic Delta_n = 2 [full - null], computed from
/// the two closed forms above rather than via plugin_mi, so the exact
/// identity Delta_n = 2n * plugin_mi is a cross-check between paths.
double lr_statistic_mi(const SymbolSequence& seq);
double lr_statistic_mi(const PairCounts& counts);

/// Maximized log-likelihood over all order-k joint transition matrices:
/// n [H(context marginal) - H(block law)].
double max_loglik_full_di(const ContextCounts& counts);

/// Maximized log-likelihood under the no-causal-influence null, where
/// the transition factorizes into Qx(x | full context) * Qy(y | y-context):
/// n [H(context) - H(x-full, y-context) + H(y-context) - H(y-full)].
double max_loglik_null_di(const ContextCounts& counts);

/// Delta_n = 2 [full - null]; equals 2n * plugin_di exactly.
double lr_statistic_di(const SymbolSequencePair& pair);
double lr_statistic_di(const ContextCounts& counts);

/// Pearson chi-squared independence statistic for i.i.d. paired rows:
/// N * sum (P_xy - P_x P_y)^2 / (P_x P_y) over cells whose marginals
/// are both positive. Uses every row; the pair's order k plays no role.
double pearson_chi_sq(const SymbolSequencePair& pair);

} // namespace dirate
