#include "dirate/model_zoo.hpp"

#include <cmath>

#include "dirate/rng.hpp"

namespace dirate {

namespace {

// Exponential draws normalized, then mixed with a uniform floor so no
// entry falls below floor_mass / cols of its row.
std::vector<double> random_rows(std::int64_t rows, std::int64_t cols, Sampler& sampler,
                                double floor_mass = 0.05) {
    std::vector<double> t(static_cast<std::size_t>(rows * cols));
    for (std::int64_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::int64_t c = 0; c < cols; ++c) {
            double g = -std::log(1.0 - sampler.uniform());
            t[static_cast<std::size_t>(r * cols + c)] = g;
            sum += g;
        }
        for (std::int64_t c = 0; c < cols; ++c) {
            double& p = t[static_cast<std::size_t>(r * cols + c)];
            p = (1.0 - floor_mass) * (p / sum) + floor_mass / static_cast<double>(cols);
        }
    }
    return t;
}

std::vector<double> uniform_pmf(std::int64_t size) {
    return std::vector<double>(static_cast<std::size_t>(size), 1.0 / static_cast<double>(size));
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

} // namespace

JointMarkovModel random_positive_joint_model(int k, int m, int ell, std::uint64_t seed) {
    Sampler sampler(seed);
    std::int64_t contexts = ipow(static_cast<std::int64_t>(m) * ell, k);
    return JointMarkovModel(k, Alphabet{m}, Alphabet{ell},
                            random_rows(contexts, static_cast<std::int64_t>(m) * ell, sampler),
                            uniform_pmf(contexts));
}

UnivariateMarkovModel random_positive_univariate_model(int k, int m, std::uint64_t seed) {
    Sampler sampler(seed);
    std::int64_t contexts = ipow(m, k);
    return UnivariateMarkovModel(k, Alphabet{m}, random_rows(contexts, m, sampler),
                                 uniform_pmf(contexts));
}

UnivariateMarkovModel random_doubly_stochastic_model(int m, std::uint64_t seed) {
    Sampler sampler(seed);
    std::vector<double> t = random_rows(m, m, sampler);
    // Sinkhorn balancing; converges fast for strictly positive matrices.
    for (int iter = 0; iter < 10000; ++iter) {
        double worst = 0.0;
        for (int c = 0; c < m; ++c) {
            double sum = 0.0;
            for (int r = 0; r < m; ++r) sum += t[static_cast<std::size_t>(r * m + c)];
            for (int r = 0; r < m; ++r) t[static_cast<std::size_t>(r * m + c)] /= sum;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        for (int r = 0; r < m; ++r) {
            double sum = 0.0;
            for (int c = 0; c < m; ++c) sum += t[static_cast<std::size_t>(r * m + c)];
            for (int c = 0; c < m; ++c) t[static_cast<std::size_t>(r * m + c)] /= sum;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        if (worst < 1e-14) break;
    }
    return UnivariateMarkovModel(1, Alphabet{m}, std::move(t), uniform_pmf(m));
}

UnivariateMarkovModel iid_univariate_model(const std::vector<double>& pmf) {
    const int m = static_cast<int>(pmf.size());
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
        t.insert(t.end(), pmf.begin(), pmf.end());
    }
    return UnivariateMarkovModel(1, Alphabet{m}, std::move(t), pmf);
}

UnivariateMarkovModel iid_uniform_univariate_model(int m) {
    return iid_univariate_model(uniform_pmf(m));
}

JointMarkovModel copy_model() {
    // Contexts are pairs (x, y); the next pair is (x', x) with x' fair.
    std::vector<double> t(16, 0.0);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            int ctx = x * 2 + y;
            for (int xp = 0; xp < 2; ++xp) {
                t[static_cast<std::size_t>(ctx * 4 + xp * 2 + x)] = 0.5;
            }
        }
    }
    return JointMarkovModel(1, Alphabet{2}, Alphabet{2}, std::move(t), uniform_pmf(4));
}

} // namespace dirate
