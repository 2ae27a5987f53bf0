#include "dirate/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "dirate/info.hpp"
#include "dirate/rng.hpp"

namespace dirate {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-10;
constexpr double kColumnSumTolerance = 1e-10;
constexpr double kPoissonResidualTolerance = 1e-9;
constexpr double kVarianceClamp = 1e-10;
constexpr std::int64_t kDenseSolveLimit = 4096;
constexpr std::int64_t kPowerIterationCap = 1000000;
constexpr double kPowerIterationTolerance = 1e-12;

std::int64_t checked_pow(std::int64_t base, int exp) {
    std::int64_t value = 1;
    for (int i = 0; i < exp; ++i) {
        if (value > (std::int64_t{1} << 56) / base) {
            throw ValidationError("state space overflows the index type");
        }
        value *= base;
    }
    return value;
}

void validate_rows(std::span<const double> transition, std::int64_t rows, std::int64_t cols,
                   const char* what) {
    if (static_cast<std::int64_t>(transition.size()) != rows * cols) {
        throw ValidationError(std::string(what) + " has wrong size: expected " +
                              std::to_string(rows * cols) + " entries, got " +
                              std::to_string(transition.size()));
    }
    for (std::int64_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::int64_t c = 0; c < cols; ++c) {
            double p = transition[static_cast<std::size_t>(r * cols + c)];
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw ValidationError(std::string(what) + ": entries must be finite and >= 0");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            throw ValidationError(std::string(what) + ": row " + std::to_string(r) +
                                  " sums to " + std::to_string(sum));
        }
    }
}

void validate_pmf(std::span<const double> pmf, std::int64_t size, const char* what) {
    if (static_cast<std::int64_t>(pmf.size()) != size) {
        throw ValidationError(std::string(what) + " has wrong size");
    }
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw ValidationError(std::string(what) + ": entries must be finite and >= 0");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw ValidationError(std::string(what) + " sums to " + std::to_string(sum));
    }
}

// Homogeneous view of either model kind: S contexts, A successor
// symbols, successor context = (ctx % span) * A + s.
struct ShiftChain {
    std::int64_t num_contexts;
    std::int64_t arity;
    std::int64_t span; // num_contexts / arity
    const double* rows;

    double prob(std::int64_t ctx, std::int64_t s) const {
        return rows[static_cast<std::size_t>(ctx * arity + s)];
    }
    std::int64_t successor(std::int64_t ctx, std::int64_t s) const {
        return (ctx % span) * arity + s;
    }
};

ShiftChain chain_of(const JointMarkovModel& model) {
    return {model.num_contexts(), model.arity(), model.num_contexts() / model.arity(),
            model.row(0).data()};
}

ShiftChain chain_of(const UnivariateMarkovModel& model) {
    return {model.num_contexts(), model.m(), model.num_contexts() / model.m(),
            model.row(0).data()};
}

// Iterative Tarjan over the positive-transition digraph.
std::vector<std::vector<std::int64_t>> strongly_connected_components(const ShiftChain& chain) {
    const std::int64_t n = chain.num_contexts;
    std::vector<std::int64_t> index(static_cast<std::size_t>(n), -1);
    std::vector<std::int64_t> low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<std::int64_t> stack;
    std::vector<std::vector<std::int64_t>> components;
    std::int64_t next_index = 0;

    struct Frame {
        std::int64_t v;
        std::int64_t edge; // next successor symbol to explore
    };
    std::vector<Frame> call_stack;

    for (std::int64_t root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        call_stack.push_back({root, 0});
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            std::int64_t v = frame.v;
            if (frame.edge == 0) {
                index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] =
                    next_index++;
                stack.push_back(v);
                on_stack[static_cast<std::size_t>(v)] = true;
            }
            bool descended = false;
            while (frame.edge < chain.arity) {
                std::int64_t s = frame.edge++;
                if (chain.prob(v, s) <= 0.0) continue;
                std::int64_t w = chain.successor(v, s);
                if (index[static_cast<std::size_t>(w)] == -1) {
                    call_stack.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(v)] = std::min(
                        low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
                }
            }
            if (descended) continue;
            if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                std::vector<std::int64_t> component;
                std::int64_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call_stack.pop_back();
            if (!call_stack.empty()) {
                Frame& parent = call_stack.back();
                low[static_cast<std::size_t>(parent.v)] =
                    std::min(low[static_cast<std::size_t>(parent.v)],
                             low[static_cast<std::size_t>(v)]);
            }
        }
    }
    return components;
}

// Period of a strongly connected chain: gcd over positive edges (u, w)
// of depth(u) + 1 - depth(w), depths from a BFS rooted at state 0.
std::int64_t chain_period(const ShiftChain& chain) {
    const std::int64_t n = chain.num_contexts;
    std::vector<std::int64_t> depth(static_cast<std::size_t>(n), -1);
    std::vector<std::int64_t> queue;
    queue.reserve(static_cast<std::size_t>(n));
    queue.push_back(0);
    depth[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::int64_t v = queue[head];
        for (std::int64_t s = 0; s < chain.arity; ++s) {
            if (chain.prob(v, s) <= 0.0) continue;
            std::int64_t w = chain.successor(v, s);
            if (depth[static_cast<std::size_t>(w)] == -1) {
                depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(v)] + 1;
                queue.push_back(w);
            }
        }
    }
    std::int64_t g = 0;
    for (std::int64_t v = 0; v < n; ++v) {
        for (std::int64_t s = 0; s < chain.arity; ++s) {
            if (chain.prob(v, s) <= 0.0) continue;
            std::int64_t w = chain.successor(v, s);
            std::int64_t diff = depth[static_cast<std::size_t>(v)] + 1 -
                                depth[static_cast<std::size_t>(w)];
            g = std::gcd(g, std::abs(diff));
        }
    }
    return g == 0 ? 1 : g;
}

void ensure_ergodic(const ShiftChain& chain) {
    auto components = strongly_connected_components(chain);
    if (components.size() != 1) {
        throw ReducibleChainError(
            "no unique stationary law: context chain is reducible into " +
                std::to_string(components.size()) + " communicating classes",
            std::move(components));
    }
    std::int64_t period = chain_period(chain);
    if (period != 1) {
        throw ReducibleChainError(
            "no unique stationary law: context chain is periodic with period " +
                std::to_string(period),
            {});
    }
}

bool ergodic(const ShiftChain& chain) {
    return strongly_connected_components(chain).size() == 1 && chain_period(chain) == 1;
}

// In-place Gaussian elimination with partial pivoting; a is n x n row-major.
void solve_dense(std::vector<double>& a, std::vector<double>& b, std::int64_t n) {
    for (std::int64_t col = 0; col < n; ++col) {
        std::int64_t pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col * n + col)]);
        for (std::int64_t r = col + 1; r < n; ++r) {
            double v = std::abs(a[static_cast<std::size_t>(r * n + col)]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-300) {
            throw InternalError("singular linear system in stationary/Poisson solve");
        }
        if (pivot != col) {
            for (std::int64_t c = col; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(pivot * n + c)],
                          a[static_cast<std::size_t>(col * n + c)]);
            }
            std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
        }
        double inv = 1.0 / a[static_cast<std::size_t>(col * n + col)];
        for (std::int64_t r = col + 1; r < n; ++r) {
            double factor = a[static_cast<std::size_t>(r * n + col)] * inv;
            if (factor == 0.0) continue;
            a[static_cast<std::size_t>(r * n + col)] = 0.0;
            for (std::int64_t c = col + 1; c < n; ++c) {
                a[static_cast<std::size_t>(r * n + c)] -=
                    factor * a[static_cast<std::size_t>(col * n + c)];
            }
            b[static_cast<std::size_t>(r)] -= factor * b[static_cast<std::size_t>(col)];
        }
    }
    for (std::int64_t r = n - 1; r >= 0; --r) {
        double acc = b[static_cast<std::size_t>(r)];
        for (std::int64_t c = r + 1; c < n; ++c) {
            acc -= a[static_cast<std::size_t>(r * n + c)] * b[static_cast<std::size_t>(c)];
        }
        b[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r * n + r)];
    }
}

std::vector<double> apply_transpose(const ShiftChain& chain, std::span<const double> pi) {
    std::vector<double> next(static_cast<std::size_t>(chain.num_contexts), 0.0);
    for (std::int64_t v = 0; v < chain.num_contexts; ++v) {
        double mass = pi[static_cast<std::size_t>(v)];
        if (mass == 0.0) continue;
        for (std::int64_t s = 0; s < chain.arity; ++s) {
            double p = chain.prob(v, s);
            if (p > 0.0) {
                next[static_cast<std::size_t>(chain.successor(v, s))] += mass * p;
            }
        }
    }
    return next;
}

std::vector<double> solve_stationary(const ShiftChain& chain) {
    ensure_ergodic(chain);
    const std::int64_t n = chain.num_contexts;

    std::vector<double> pi;
    if (n <= kDenseSolveLimit) {
        // (P^T - I) pi = 0 with row 0 replaced by the normalization.
        std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
        for (std::int64_t v = 0; v < n; ++v) {
            for (std::int64_t s = 0; s < chain.arity; ++s) {
                double p = chain.prob(v, s);
                if (p > 0.0) {
                    std::int64_t w = chain.successor(v, s);
                    a[static_cast<std::size_t>(w * n + v)] += p;
                }
            }
        }
        for (std::int64_t v = 0; v < n; ++v) {
            a[static_cast<std::size_t>(v * n + v)] -= 1.0;
        }
        std::vector<double> b(static_cast<std::size_t>(n), 0.0);
        for (std::int64_t v = 0; v < n; ++v) {
            a[static_cast<std::size_t>(v)] = 1.0; // row 0 := ones
        }
        b[0] = 1.0;
        solve_dense(a, b, n);
        pi = std::move(b);
        // Round-off can leave microscopic negatives on near-degenerate rows.
        double total = 0.0;
        for (double& p : pi) {
            if (p < 0.0) p = 0.0;
            total += p;
        }
        for (double& p : pi) p /= total;
    } else {
        pi.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
        std::int64_t iter = 0;
        for (; iter < kPowerIterationCap; ++iter) {
            std::vector<double> next = apply_transpose(chain, pi);
            double delta = 0.0;
            for (std::int64_t v = 0; v < n; ++v) {
                delta += std::abs(next[static_cast<std::size_t>(v)] -
                                  pi[static_cast<std::size_t>(v)]);
            }
            pi = std::move(next);
            if (delta < kPowerIterationTolerance) break;
        }
        if (iter == kPowerIterationCap) {
            throw InternalError("power iteration did not converge");
        }
    }

    // Fixed-point certificate.
    std::vector<double> image = apply_transpose(chain, pi);
    double drift = 0.0;
    for (std::int64_t v = 0; v < n; ++v) {
        drift += std::abs(image[static_cast<std::size_t>(v)] - pi[static_cast<std::size_t>(v)]);
    }
    if (drift > kStationaryTolerance) {
        throw InternalError("stationary solve failed the piP = pi certificate: drift " +
                            std::to_string(drift));
    }
    return pi;
}

std::vector<int> interleaved_radices(int k, int m, int ell) {
    std::vector<int> radices;
    radices.reserve(2 * static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        radices.push_back(m);
        radices.push_back(ell);
    }
    return radices;
}

// Long-run variance of partial sums of f over an ergodic finite chain,
// via the Poisson equation g - Pg = f - pi(f):
//   sigma^2 = pi(g^2) - pi((Pg)^2).
// `transitions[i]` lists (j, p) successors in a dense local indexing.
double long_run_variance(const std::vector<std::vector<std::pair<std::int64_t, double>>>& transitions,
                         std::span<const double> pi, std::span<const double> f) {
    const std::int64_t n = static_cast<std::int64_t>(pi.size());
    if (n > kDenseSolveLimit) {
        throw ValidationError("state space too large for the exact variance solve (" +
                              std::to_string(n) + " states > 4096)");
    }
    double mean = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        mean += pi[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    }

    std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
    std::vector<double> fbar(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        // I - P + 1*pi^T is nonsingular for ergodic chains and its
        // solution solves (I - P) g = fbar with pi(g) = 0.
        for (std::int64_t j = 0; j < n; ++j) {
            a[static_cast<std::size_t>(i * n + j)] = pi[static_cast<std::size_t>(j)];
        }
        a[static_cast<std::size_t>(i * n + i)] += 1.0;
        for (const auto& [j, p] : transitions[static_cast<std::size_t>(i)]) {
            a[static_cast<std::size_t>(i * n + j)] -= p;
        }
        fbar[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)] - mean;
    }
    std::vector<double> g = fbar;
    solve_dense(a, g, n);

    std::vector<double> pg(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& [j, p] : transitions[static_cast<std::size_t>(i)]) {
            acc += p * g[static_cast<std::size_t>(j)];
        }
        pg[static_cast<std::size_t>(i)] = acc;
    }

    double residual = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        residual = std::max(residual, std::abs(g[static_cast<std::size_t>(i)] -
                                               pg[static_cast<std::size_t>(i)] -
                                               fbar[static_cast<std::size_t>(i)]));
    }
    if (residual > kPoissonResidualTolerance) {
        throw InternalError("Poisson equation residual " + std::to_string(residual) +
                            " exceeds 1e-9");
    }

    double sigma_sq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        sigma_sq += pi[static_cast<std::size_t>(i)] *
                    (g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)] -
                     pg[static_cast<std::size_t>(i)] * pg[static_cast<std::size_t>(i)]);
    }
    if (sigma_sq < -kVarianceClamp) {
        throw InternalError("asymptotic variance evaluated to " + std::to_string(sigma_sq));
    }
    return std::max(sigma_sq, 0.0);
}

} // namespace

JointMarkovModel::JointMarkovModel(int k, Alphabet a, Alphabet b,
                                   std::vector<double> transition, std::vector<double> initial)
    : k_(k), a_(a), b_(b), transition_(std::move(transition)), initial_(std::move(initial)) {
    if (k_ < 1) throw ValidationError("order k must be >= 1");
    if (a_.size < 1 || b_.size < 1) throw ValidationError("alphabet sizes must be >= 1");
    num_contexts_ = checked_pow(static_cast<std::int64_t>(a_.size) * b_.size, k_);
    validate_rows(transition_, num_contexts_, arity(), "joint transition matrix");
    validate_pmf(initial_, num_contexts_, "initial distribution");
}

UnivariateMarkovModel::UnivariateMarkovModel(int k, Alphabet a, std::vector<double> transition,
                                             std::vector<double> initial)
    : k_(k), a_(a), transition_(std::move(transition)), initial_(std::move(initial)) {
    if (k_ < 1) throw ValidationError("order k must be >= 1");
    if (a_.size < 1) throw ValidationError("alphabet size must be >= 1");
    num_contexts_ = checked_pow(a_.size, k_);
    validate_rows(transition_, num_contexts_, a_.size, "transition matrix");
    validate_pmf(initial_, num_contexts_, "initial distribution");
}

StationaryLaw stationary_law(const JointMarkovModel& model) {
    ShiftChain chain = chain_of(model);
    std::vector<double> pi = solve_stationary(chain);

    std::vector<double> block(static_cast<std::size_t>(chain.num_contexts * chain.arity), 0.0);
    for (std::int64_t ctx = 0; ctx < chain.num_contexts; ++ctx) {
        for (std::int64_t s = 0; s < chain.arity; ++s) {
            block[static_cast<std::size_t>(ctx * chain.arity + s)] =
                pi[static_cast<std::size_t>(ctx)] * chain.prob(ctx, s);
        }
    }
    return StationaryLaw{
        DiscreteDistribution(std::move(block),
                             interleaved_radices(model.order() + 1, model.m(), model.ell())),
        DiscreteDistribution(std::move(pi),
                             interleaved_radices(model.order(), model.m(), model.ell())),
    };
}

std::vector<double> stationary_distribution(const UnivariateMarkovModel& model) {
    return solve_stationary(chain_of(model));
}

bool is_ergodic(const JointMarkovModel& model) { return ergodic(chain_of(model)); }
bool is_ergodic(const UnivariateMarkovModel& model) { return ergodic(chain_of(model)); }

namespace {

template <typename PushSymbol>
void run_simulation(const ShiftChain& chain, std::span<const double> initial, std::int64_t n,
                    std::uint64_t seed, int k, PushSymbol&& push) {
    Sampler sampler(seed);
    std::int64_t ctx = sampler.categorical(initial);
    // Emit the initial context, oldest symbol first.
    std::int64_t divisor = chain.span;
    std::int64_t rest = ctx;
    for (int j = 0; j < k; ++j) {
        push(static_cast<int>(rest / divisor));
        rest %= divisor;
        divisor /= chain.arity;
    }
    for (std::int64_t i = 0; i < n; ++i) {
        int s = sampler.categorical(
            std::span<const double>(chain.rows + ctx * chain.arity,
                                    static_cast<std::size_t>(chain.arity)));
        push(s);
        ctx = chain.successor(ctx, s);
    }
}

} // namespace

SymbolSequencePair simulate(const JointMarkovModel& model, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("simulate: n must be >= 1");
    std::vector<int> xs, ys;
    xs.reserve(static_cast<std::size_t>(n + model.order()));
    ys.reserve(static_cast<std::size_t>(n + model.order()));
    const int ell = model.ell();
    run_simulation(chain_of(model), model.initial(), n, seed, model.order(), [&](int s) {
        xs.push_back(s / ell);
        ys.push_back(s % ell);
    });
    return SymbolSequencePair(std::move(xs), std::move(ys), model.alphabet_x(),
                              model.alphabet_y(), model.order());
}

SymbolSequence simulate(const UnivariateMarkovModel& model, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("simulate: n must be >= 1");
    std::vector<int> xs;
    xs.reserve(static_cast<std::size_t>(n + model.order()));
    run_simulation(chain_of(model), model.initial(), n, seed, model.order(),
                   [&](int s) { xs.push_back(s); });
    return SymbolSequence(std::move(xs), model.alphabet());
}

double analytic_mi_rate(const UnivariateMarkovModel& model) {
    if (model.order() != 1) {
        throw ValidationError("analytic_mi_rate requires a first-order chain");
    }
    std::vector<double> pi = stationary_distribution(model);
    const int m = model.m();
    std::vector<double> joint(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            joint[static_cast<std::size_t>(a) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(b)] =
                pi[static_cast<std::size_t>(a)] * model.transition(a, b);
        }
    }
    return mutual_information(DiscreteDistribution(std::move(joint), {m, m}));
}

double analytic_di_rate(const JointMarkovModel& model) {
    StationaryLaw law = stationary_law(model);
    const int k = model.order();
    double h_y_full = entropy(marginalize(law.block_pmf, block_slots::y_full(k)));
    double h_xfull_yctx = entropy(marginalize(law.block_pmf, block_slots::x_full_y_context(k)));
    double h_block = entropy(law.block_pmf);
    double h_yctx = entropy(marginalize(law.block_pmf, block_slots::y_context(k)));
    double value = h_y_full + h_xfull_yctx - h_block - h_yctx;
    if (value < 0.0) {
        if (value < -1e-12) {
            throw InternalError("directed information rate evaluated to " +
                                std::to_string(value));
        }
        value = 0.0;
    }
    return value;
}

double sigma_sq_mi(const UnivariateMarkovModel& model) {
    if (model.order() != 1) {
        throw ValidationError("sigma_sq_mi requires a first-order chain");
    }
    std::vector<double> pi = stationary_distribution(model);
    const int m = model.m();

    // States of the lifted chain are the transitions (a, a') with
    // positive probability; f is the per-step information log-ratio.
    std::vector<std::int64_t> local(static_cast<std::size_t>(m) * static_cast<std::size_t>(m),
                                    -1);
    std::vector<double> pi_z, f;
    std::vector<std::pair<int, int>> states;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            double q = model.transition(a, b);
            if (q <= 0.0) continue;
            local[static_cast<std::size_t>(a) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(b)] = static_cast<std::int64_t>(states.size());
            states.emplace_back(a, b);
            pi_z.push_back(pi[static_cast<std::size_t>(a)] * q);
            f.push_back(std::log(q / pi[static_cast<std::size_t>(b)]));
        }
    }

    std::vector<std::vector<std::pair<std::int64_t, double>>> transitions(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        int from = states[i].second;
        for (int to = 0; to < m; ++to) {
            double q = model.transition(from, to);
            if (q <= 0.0) continue;
            transitions[i].emplace_back(
                local[static_cast<std::size_t>(from) * static_cast<std::size_t>(m) +
                      static_cast<std::size_t>(to)],
                q);
        }
    }
    return long_run_variance(transitions, pi_z, f);
}

double sigma_sq_di(const JointMarkovModel& model) {
    StationaryLaw law = stationary_law(model);
    const int k = model.order();
    const int m = model.m();
    const int ell = model.ell();
    ShiftChain chain = chain_of(model);

    // Dense marginals of the stationary block law, indexed by the
    // projections of the block digits.
    const std::int64_t y_full_cells = checked_pow(ell, k + 1);
    const std::int64_t y_ctx_cells = checked_pow(ell, k);
    const std::int64_t x_full_cells = checked_pow(m, k + 1);
    std::vector<double> p_y_full(static_cast<std::size_t>(y_full_cells), 0.0);
    std::vector<double> p_y_ctx(static_cast<std::size_t>(y_ctx_cells), 0.0);
    std::vector<double> p_x_full_y_ctx(
        static_cast<std::size_t>(x_full_cells * y_ctx_cells), 0.0);

    const std::int64_t cells = law.block_pmf.size();
    std::vector<std::int64_t> y_full_of(static_cast<std::size_t>(cells));
    std::vector<std::int64_t> y_ctx_of(static_cast<std::size_t>(cells));
    std::vector<std::int64_t> x_full_y_ctx_of(static_cast<std::size_t>(cells));
    for (std::int64_t b = 0; b < cells; ++b) {
        std::int64_t rest = b;
        std::int64_t y_full_idx = 0, y_ctx_idx = 0, x_full_idx = 0;
        std::int64_t power = checked_pow(chain.arity, k);
        for (int j = 0; j <= k; ++j) {
            std::int64_t s = rest / power;
            rest %= power;
            power /= chain.arity;
            std::int64_t x = s / ell;
            std::int64_t y = s % ell;
            y_full_idx = y_full_idx * ell + y;
            x_full_idx = x_full_idx * m + x;
            if (j < k) y_ctx_idx = y_ctx_idx * ell + y;
        }
        y_full_of[static_cast<std::size_t>(b)] = y_full_idx;
        y_ctx_of[static_cast<std::size_t>(b)] = y_ctx_idx;
        x_full_y_ctx_of[static_cast<std::size_t>(b)] = x_full_idx * y_ctx_cells + y_ctx_idx;
        double p = law.block_pmf[b];
        if (p > 0.0) {
            p_y_full[static_cast<std::size_t>(y_full_idx)] += p;
            p_y_ctx[static_cast<std::size_t>(y_ctx_idx)] += p;
            p_x_full_y_ctx[static_cast<std::size_t>(x_full_idx * y_ctx_cells + y_ctx_idx)] += p;
        }
    }

    // Lifted block chain restricted to the stationary support.
    std::vector<std::int64_t> local(static_cast<std::size_t>(cells), -1);
    std::vector<std::int64_t> support;
    std::vector<double> pi_z, f;
    for (std::int64_t b = 0; b < cells; ++b) {
        double p = law.block_pmf[b];
        if (p <= 0.0) continue;
        local[static_cast<std::size_t>(b)] = static_cast<std::int64_t>(support.size());
        support.push_back(b);
        pi_z.push_back(p);
        f.push_back(std::log(p) + std::log(p_y_ctx[static_cast<std::size_t>(
                                       y_ctx_of[static_cast<std::size_t>(b)])]) -
                    std::log(p_y_full[static_cast<std::size_t>(
                        y_full_of[static_cast<std::size_t>(b)])]) -
                    std::log(p_x_full_y_ctx[static_cast<std::size_t>(
                        x_full_y_ctx_of[static_cast<std::size_t>(b)])]));
    }

    std::vector<std::vector<std::pair<std::int64_t, double>>> transitions(support.size());
    const std::int64_t ctx_cells = chain.num_contexts;
    for (std::size_t i = 0; i < support.size(); ++i) {
        std::int64_t next_ctx = support[i] % ctx_cells;
        for (std::int64_t s = 0; s < chain.arity; ++s) {
            double q = chain.prob(next_ctx, s);
            if (q <= 0.0) continue;
            std::int64_t b2 = next_ctx * chain.arity + s;
            transitions[i].emplace_back(local[static_cast<std::size_t>(b2)], q);
        }
    }
    return long_run_variance(transitions, pi_z, f);
}

bool is_doubly_stochastic(const UnivariateMarkovModel& model) {
    const int m = model.m();
    for (int col = 0; col < m; ++col) {
        double sum = 0.0;
        for (std::int64_t row = 0; row < model.num_contexts(); ++row) {
            sum += model.transition(row, col);
        }
        if (std::abs(sum - 1.0) > kColumnSumTolerance) return false;
    }
    return true;
}

JointMarkovModel fit_joint_model(const ContextCounts& counts) {
    const int k = counts.order();
    const std::int64_t arity = static_cast<std::int64_t>(counts.m()) * counts.ell();
    const std::int64_t num_contexts = checked_pow(arity, k);

    std::vector<std::int64_t> context_totals(static_cast<std::size_t>(num_contexts), 0);
    for (const auto& [block, count] : counts.counts()) {
        context_totals[static_cast<std::size_t>(block / arity)] += count;
    }
    for (std::int64_t ctx = 0; ctx < num_contexts; ++ctx) {
        if (context_totals[static_cast<std::size_t>(ctx)] == 0) {
            throw ValidationError(
                "cannot fit a transition matrix: context " + std::to_string(ctx) +
                " was never observed; use a larger sample or pass an explicit model");
        }
    }

    std::vector<double> transition(static_cast<std::size_t>(num_contexts * arity), 0.0);
    for (const auto& [block, count] : counts.counts()) {
        transition[static_cast<std::size_t>(block)] =
            static_cast<double>(count) /
            static_cast<double>(context_totals[static_cast<std::size_t>(block / arity)]);
    }
    std::vector<double> initial(static_cast<std::size_t>(num_contexts));
    for (std::int64_t ctx = 0; ctx < num_contexts; ++ctx) {
        initial[static_cast<std::size_t>(ctx)] =
            static_cast<double>(context_totals[static_cast<std::size_t>(ctx)]) /
            static_cast<double>(counts.n());
    }
    return JointMarkovModel(k, Alphabet{counts.m()}, Alphabet{counts.ell()},
                            std::move(transition), std::move(initial));
}

JointMarkovModel product_model(const UnivariateMarkovModel& x, const UnivariateMarkovModel& y) {
    if (x.order() != y.order()) {
        throw ValidationError("product_model: chains must have the same order");
    }
    const int k = x.order();
    const int m = x.m();
    const int ell = y.m();
    const std::int64_t arity = static_cast<std::int64_t>(m) * ell;
    const std::int64_t num_contexts = checked_pow(arity, k);

    // Joint context digits are the interleaving of the two univariate
    // context digit strings.
    auto split_context = [&](std::int64_t ctx) {
        std::int64_t cx = 0, cy = 0;
        std::int64_t power = checked_pow(arity, k - 1);
        for (int j = 0; j < k; ++j) {
            std::int64_t s = ctx / power;
            ctx %= power;
            power /= arity;
            cx = cx * m + s / ell;
            cy = cy * ell + s % ell;
        }
        return std::pair<std::int64_t, std::int64_t>{cx, cy};
    };

    std::vector<double> transition(static_cast<std::size_t>(num_contexts * arity));
    std::vector<double> initial(static_cast<std::size_t>(num_contexts));
    for (std::int64_t ctx = 0; ctx < num_contexts; ++ctx) {
        auto [cx, cy] = split_context(ctx);
        double row_sum = 0.0;
        for (int sx = 0; sx < m; ++sx) {
            for (int sy = 0; sy < ell; ++sy) {
                double p = x.transition(cx, sx) * y.transition(cy, sy);
                transition[static_cast<std::size_t>(ctx * arity + sx * ell + sy)] = p;
                row_sum += p;
            }
        }
        for (std::int64_t s = 0; s < arity; ++s) {
            transition[static_cast<std::size_t>(ctx * arity + s)] /= row_sum;
        }
        initial[static_cast<std::size_t>(ctx)] =
            x.initial()[static_cast<std::size_t>(cx)] * y.initial()[static_cast<std::size_t>(cy)];
    }
    double init_sum = 0.0;
    for (double p : initial) init_sum += p;
    for (double& p : initial) p /= init_sum;

    return JointMarkovModel(k, Alphabet{m}, Alphabet{ell}, std::move(transition),
                            std::move(initial));
}

} // namespace dirate
