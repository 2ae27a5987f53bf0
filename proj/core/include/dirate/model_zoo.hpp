#pragma once

#include <cstdint>

#include "dirate/markov.hpp"

namespace dirate {

// Model generators for Monte Carlo harnesses and tests. All are
// deterministic in the seed and produce ergodic chains.

/// Random strictly positive order-k joint law: Dirichlet-like rows
/// (exponential draws plus a floor keeping every entry above
/// 0.05/(m*ell) of its row), uniform initial distribution.
JointMarkovModel random_positive_joint_model(int k, int m, int ell, std::uint64_t seed);

UnivariateMarkovModel random_positive_univariate_model(int k, int m, std::uint64_t seed);

/// Random strictly positive doubly stochastic first-order chain,
/// balanced by Sinkhorn iteration.
UnivariateMarkovModel random_doubly_stochastic_model(int m, std::uint64_t seed);

/// First-order i.i.d. chain: every row equals `pmf`.
UnivariateMarkovModel iid_univariate_model(const std::vector<double>& pmf);

UnivariateMarkovModel iid_uniform_univariate_model(int m);

/// The canonical causal pair: X i.i.d. uniform bits, Y_i = X_{i-1}
/// (k = 1, m = ell = 2, directed information rate log 2).
JointMarkovModel copy_model();

} // namespace dirate
