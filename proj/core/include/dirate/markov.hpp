#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dirate/counts.hpp"
#include "dirate/distribution.hpp"
#include "dirate/sequences.hpp"

namespace dirate {

/// Order-k joint Markov law of a pair process on A x B. Transition rows
/// are indexed by the flattened context (k pair symbols, oldest digit
/// most significant) and give a pmf over the m*ell next pair symbols.
/// Immutable after construction; rows must sum to 1 within 1e-12.
class JointMarkovModel {
public:
    JointMarkovModel(int k, Alphabet a, Alphabet b, std::vector<double> transition,
                     std::vector<double> initial);

    int order() const noexcept { return k_; }
    int m() const noexcept { return a_.size; }
    int ell() const noexcept { return b_.size; }
    Alphabet alphabet_x() const noexcept { return a_; }
    Alphabet alphabet_y() const noexcept { return b_; }
    int arity() const noexcept { return a_.size * b_.size; }
    std::int64_t num_contexts() const noexcept { return num_contexts_; }

    std::span<const double> row(std::int64_t context) const noexcept {
        return {transition_.data() + context * arity(), static_cast<std::size_t>(arity())};
    }
    double transition(std::int64_t context, int symbol) const noexcept {
        return transition_[static_cast<std::size_t>(context * arity() + symbol)];
    }
    std::span<const double> initial() const noexcept { return initial_; }

private:
    int k_;
    Alphabet a_, b_;
    std::int64_t num_contexts_;
    std::vector<double> transition_;
    std::vector<double> initial_;
};

/// Order-k law of a single chain on A; same conventions.
class UnivariateMarkovModel {
public:
    UnivariateMarkovModel(int k, Alphabet a, std::vector<double> transition,
                          std::vector<double> initial);

    int order() const noexcept { return k_; }
    int m() const noexcept { return a_.size; }
    Alphabet alphabet() const noexcept { return a_; }
    std::int64_t num_contexts() const noexcept { return num_contexts_; }

    std::span<const double> row(std::int64_t context) const noexcept {
        return {transition_.data() + context * a_.size, static_cast<std::size_t>(a_.size)};
    }
    double transition(std::int64_t context, int symbol) const noexcept {
        return transition_[static_cast<std::size_t>(context * a_.size + symbol)];
    }
    std::span<const double> initial() const noexcept { return initial_; }

private:
    int k_;
    Alphabet a_;
    std::int64_t num_contexts_;
    std::vector<double> transition_;
    std::vector<double> initial_;
};

/// Stationary law of the context chain extended to (k+1)-blocks:
/// block_pmf is the law of a stationary (k+1)-block, context_pmf its
/// marginal over the k oldest pairs.
struct StationaryLaw {
    DiscreteDistribution block_pmf;
    DiscreteDistribution context_pmf;
};

/// Unique stationary law of an ergodic model. Dense linear solve up to
/// 4096 context states, power iteration (tol 1e-12, cap 1e6) above.
/// Throws ReducibleChainError when the context chain is reducible or
/// periodic.
StationaryLaw stationary_law(const JointMarkovModel& model);

/// Stationary pmf over the context states of a univariate model.
std::vector<double> stationary_distribution(const UnivariateMarkovModel& model);

bool is_ergodic(const JointMarkovModel& model);
bool is_ergodic(const UnivariateMarkovModel& model);

/// Length n+k sample path: initial context drawn from `initial`, then n
/// transitions. Deterministic given the seed.
SymbolSequencePair simulate(const JointMarkovModel& model, std::int64_t n, std::uint64_t seed);
SymbolSequence simulate(const UnivariateMarkovModel& model, std::int64_t n, std::uint64_t seed);

/// Equilibrium mutual information I(X_0; X_1) of a first-order chain,
/// in nats. Requires k == 1.
double analytic_mi_rate(const UnivariateMarkovModel& model);

/// Conditional mutual information I(Y_new; X-block | Y-context) of the
/// stationary (k+1)-block law, in nats. Equals the directed information
/// rate X -> Y exactly when the Y stream is itself Markov of order <= k;
/// otherwise it is the conditional-MI causality functional for memory k.
/// (The general directed information rate involves the entropy rate of
/// the Y marginal, which has no closed form here.)
double analytic_di_rate(const JointMarkovModel& model);

/// Asymptotic variance of the per-step information log-ratio, computed
/// exactly by solving the Poisson equation on the lifted chain.
/// Requires k == 1 for the mutual-information variant.
double sigma_sq_mi(const UnivariateMarkovModel& model);
double sigma_sq_di(const JointMarkovModel& model);

/// True iff every column of the transition matrix sums to 1 within 1e-10.
bool is_doubly_stochastic(const UnivariateMarkovModel& model);

/// Maximum-likelihood transition fit from block counts (the plug-in
/// model). Throws when some context was never observed; the returned
/// model may still be non-ergodic, which stationary_law will report.
JointMarkovModel fit_joint_model(const ContextCounts& counts);

/// Joint law of two independent chains of the same order.
JointMarkovModel product_model(const UnivariateMarkovModel& x, const UnivariateMarkovModel& y);

} // namespace dirate
