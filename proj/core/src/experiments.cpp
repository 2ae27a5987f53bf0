#include "dirate/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "dirate/estimators.hpp"
#include "dirate/inference.hpp"
#include "dirate/model_zoo.hpp"
#include "dirate/rng.hpp"

namespace dirate {

namespace {

// Asymptotic 1% Kolmogorov critical value for N samples.
double ks_critical_1pct(std::int64_t trials) {
    return 1.63 / std::sqrt(static_cast<double>(trials));
}

void validate_common(const ExperimentConfig& config, int k_needed) {
    if (config.trials < 1) throw ValidationError("experiment needs trials >= 1");
    if (config.kind != ExperimentKind::identity_fuzz) {
        if (config.n_grid.empty()) throw ValidationError("experiment needs a sample size");
        for (std::size_t i = 0; i + 1 < config.n_grid.size(); ++i) {
            if (config.n_grid[i] >= config.n_grid[i + 1]) {
                throw ValidationError("n grid must be strictly increasing");
            }
        }
        for (std::int64_t n : config.n_grid) {
            if (n < k_needed + 1) {
                throw ValidationError("sample size must be at least k+1");
            }
        }
    }
}

const JointMarkovModel& require_joint(const ExperimentConfig& config) {
    if (!config.joint_model.has_value()) {
        throw ValidationError("this experiment needs a joint model (--di)");
    }
    return *config.joint_model;
}

const UnivariateMarkovModel& require_univariate(const ExperimentConfig& config) {
    if (!config.univariate_model.has_value()) {
        throw ValidationError("this experiment needs a univariate model (--mi)");
    }
    return *config.univariate_model;
}

double ihat_of_trial(const ExperimentConfig& config, std::int64_t n, std::uint64_t seed) {
    if (config.functional == Functional::di) {
        return plugin_di(simulate(require_joint(config), n, seed)).i_hat;
    }
    return plugin_mi(simulate(require_univariate(config), n, seed)).i_hat;
}

ExperimentResult run_chi2_null(const ExperimentConfig& config) {
    const bool di = config.functional == Functional::di;
    const int k = di ? require_joint(config).order() : require_univariate(config).order();
    validate_common(config, k);
    const std::int64_t n = config.n_grid.front();
    const std::int64_t dof =
        di ? dof_di(require_joint(config).m(), require_joint(config).ell(), k)
           : dof_mi(require_univariate(config).m());

    ExperimentResult result;
    result.columns = {"trial", "statistic"};
    result.rows.assign(static_cast<std::size_t>(config.trials), {});
    parallel_for_trials(config.trials, config.threads, [&](std::int64_t trial) {
        double ihat = ihat_of_trial(config, n, split_seed(config.seed, trial));
        result.rows[static_cast<std::size_t>(trial)] = {static_cast<double>(trial),
                                                        2.0 * static_cast<double>(n) * ihat};
    });

    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(config.trials));
    double mean = 0.0;
    for (const auto& row : result.rows) {
        stats.push_back(row[1]);
        mean += row[1];
    }
    mean /= static_cast<double>(config.trials);
    std::sort(stats.begin(), stats.end());
    double ks = ks_distance(stats, [dof](double x) { return chi_sq_cdf(std::max(x, 0.0), dof); });

    result.summary = {{"n", static_cast<double>(n)},
                      {"dof", static_cast<double>(dof)},
                      {"mean_statistic", mean},
                      {"ks_distance", ks},
                      {"ks_critical_1pct", ks_critical_1pct(config.trials)}};
    return result;
}

ExperimentResult run_clt(const ExperimentConfig& config) {
    const bool di = config.functional == Functional::di;
    const int k = di ? require_joint(config).order() : require_univariate(config).order();
    validate_common(config, k);
    const std::int64_t n = config.n_grid.front();

    const double rate = di ? analytic_di_rate(require_joint(config))
                           : analytic_mi_rate(require_univariate(config));
    const double sigma_sq =
        di ? sigma_sq_di(require_joint(config)) : sigma_sq_mi(require_univariate(config));
    if (sigma_sq <= 0.0) {
        throw ValidationError("cannot standardize: the model has zero asymptotic variance");
    }
    const double sigma = std::sqrt(sigma_sq);

    ExperimentResult result;
    result.columns = {"trial", "i_hat", "z"};
    result.rows.assign(static_cast<std::size_t>(config.trials), {});
    parallel_for_trials(config.trials, config.threads, [&](std::int64_t trial) {
        double ihat = ihat_of_trial(config, n, split_seed(config.seed, trial));
        double z = std::sqrt(static_cast<double>(n)) * (ihat - rate) / sigma;
        result.rows[static_cast<std::size_t>(trial)] = {static_cast<double>(trial), ihat, z};
    });

    std::vector<double> zs;
    zs.reserve(static_cast<std::size_t>(config.trials));
    for (const auto& row : result.rows) zs.push_back(row[2]);
    std::sort(zs.begin(), zs.end());
    double ks = ks_distance(zs, [](double x) { return normal_cdf(x); });

    result.summary = {{"n", static_cast<double>(n)},
                      {"analytic_rate", rate},
                      {"sigma", sigma},
                      {"ks_distance", ks},
                      {"ks_critical_1pct", ks_critical_1pct(config.trials)}};
    return result;
}

ExperimentResult run_rate_dichotomy(const ExperimentConfig& config) {
    const bool di = config.functional == Functional::di;
    const int k = di ? require_joint(config).order() : require_univariate(config).order();
    validate_common(config, k);
    if (config.n_grid.size() < 2) {
        throw ValidationError("rate-dichotomy needs an n grid with at least two sizes");
    }
    const double rate = di ? analytic_di_rate(require_joint(config))
                           : analytic_mi_rate(require_univariate(config));

    const std::int64_t grid = static_cast<std::int64_t>(config.n_grid.size());
    const std::int64_t tasks = grid * config.trials;

    ExperimentResult result;
    result.columns = {"n", "trial", "i_hat", "abs_err"};
    result.rows.assign(static_cast<std::size_t>(tasks), {});
    parallel_for_trials(tasks, config.threads, [&](std::int64_t task) {
        const std::int64_t g = task / config.trials;
        const std::int64_t trial = task % config.trials;
        const std::int64_t n = config.n_grid[static_cast<std::size_t>(g)];
        double ihat = ihat_of_trial(config, n, split_seed(config.seed, task));
        result.rows[static_cast<std::size_t>(task)] = {static_cast<double>(n),
                                                       static_cast<double>(trial), ihat,
                                                       std::abs(ihat - rate)};
    });

    std::vector<double> log_n, log_mean_err, log_mean_est;
    for (std::int64_t g = 0; g < grid; ++g) {
        double err = 0.0, est = 0.0;
        for (std::int64_t t = 0; t < config.trials; ++t) {
            const auto& row = result.rows[static_cast<std::size_t>(g * config.trials + t)];
            est += row[2];
            err += row[3];
        }
        err /= static_cast<double>(config.trials);
        est /= static_cast<double>(config.trials);
        log_n.push_back(std::log(static_cast<double>(config.n_grid[static_cast<std::size_t>(g)])));
        log_mean_err.push_back(std::log(std::max(err, 1e-300)));
        log_mean_est.push_back(std::log(std::max(est, 1e-300)));
    }

    result.summary = {{"analytic_rate", rate},
                      {"slope_mean_abs_err", regression_slope(log_n, log_mean_err)},
                      {"slope_mean_estimate", regression_slope(log_n, log_mean_est)}};
    return result;
}

ExperimentResult run_coverage(const ExperimentConfig& config) {
    if (config.functional != Functional::di) {
        throw ValidationError("coverage is defined for the directed-information functional");
    }
    const JointMarkovModel& model = require_joint(config);
    validate_common(config, model.order());
    const std::int64_t n = config.n_grid.front();
    const double rate = analytic_di_rate(model);

    ExperimentResult result;
    result.columns = {"trial", "center", "half_width", "covered"};
    result.rows.assign(static_cast<std::size_t>(config.trials), {});
    parallel_for_trials(config.trials, config.threads, [&](std::int64_t trial) {
        SymbolSequencePair pair = simulate(model, n, split_seed(config.seed, trial));
        ConfidenceInterval ci = confidence_interval_di(pair, config.level, &model);
        bool covered = std::abs(ci.center - rate) <= ci.half_width;
        result.rows[static_cast<std::size_t>(trial)] = {static_cast<double>(trial), ci.center,
                                                        ci.half_width, covered ? 1.0 : 0.0};
    });

    double coverage = 0.0;
    for (const auto& row : result.rows) coverage += row[3];
    coverage /= static_cast<double>(config.trials);
    result.summary = {{"n", static_cast<double>(n)},
                      {"analytic_rate", rate},
                      {"level", config.level},
                      {"coverage", coverage}};
    return result;
}

ExperimentResult run_identity_fuzz(const ExperimentConfig& config) {
    if (config.trials < 1) throw ValidationError("experiment needs trials >= 1");

    ExperimentResult result;
    result.columns = {"trial", "k",        "m",    "ell", "n",
                      "rel_dev_di", "m_mi", "n_mi", "rel_dev_mi"};
    result.rows.assign(static_cast<std::size_t>(config.trials), {});
    parallel_for_trials(config.trials, config.threads, [&](std::int64_t trial) {
        Sampler dims(split_seed(config.seed, trial));
        const int k = 1 + dims.categorical(std::vector<double>{0.5, 0.5});
        const int m = 2 + dims.categorical(std::vector<double>{0.5, 0.5});
        const int ell = 2 + dims.categorical(std::vector<double>{0.5, 0.5});
        const std::int64_t n = 50 + static_cast<std::int64_t>(dims.uniform() * 4951.0);

        JointMarkovModel joint = random_positive_joint_model(k, m, ell, dims.next_word());
        SymbolSequencePair pair = simulate(joint, n, dims.next_word());
        ContextCounts counts = count_blocks(pair);
        double delta_di = lr_statistic_di(counts);
        double two_n_ihat_di = 2.0 * static_cast<double>(counts.n()) * plugin_di(counts).i_hat;
        double dev_di =
            std::abs(delta_di - two_n_ihat_di) / std::max(std::abs(delta_di), 1e-12);

        const int m_mi = 2 + dims.categorical(std::vector<double>{0.5, 0.5});
        const std::int64_t n_mi = 50 + static_cast<std::int64_t>(dims.uniform() * 4951.0);
        UnivariateMarkovModel uni =
            random_positive_univariate_model(1, m_mi, dims.next_word());
        SymbolSequence seq = simulate(uni, n_mi, dims.next_word());
        PairCounts pairs = count_pairs(seq);
        double delta_mi = lr_statistic_mi(pairs);
        double two_n_ihat_mi = 2.0 * static_cast<double>(pairs.n()) * plugin_mi(pairs).i_hat;
        double dev_mi =
            std::abs(delta_mi - two_n_ihat_mi) / std::max(std::abs(delta_mi), 1e-12);

        result.rows[static_cast<std::size_t>(trial)] = {
            static_cast<double>(trial), static_cast<double>(k),     static_cast<double>(m),
            static_cast<double>(ell),   static_cast<double>(n),     dev_di,
            static_cast<double>(m_mi),  static_cast<double>(n_mi),  dev_mi};
    });

    double max_di = 0.0, max_mi = 0.0;
    for (const auto& row : result.rows) {
        max_di = std::max(max_di, row[5]);
        max_mi = std::max(max_mi, row[8]);
    }
    result.summary = {{"max_rel_dev_di", max_di}, {"max_rel_dev_mi", max_mi}};
    return result;
}

} // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "chi2-null") return ExperimentKind::chi2_null;
    if (name == "clt") return ExperimentKind::clt;
    if (name == "rate-dichotomy") return ExperimentKind::rate_dichotomy;
    if (name == "coverage") return ExperimentKind::coverage;
    if (name == "identity-fuzz") return ExperimentKind::identity_fuzz;
    throw ValidationError("unknown experiment kind: " + name);
}

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::chi2_null: return "chi2-null";
    case ExperimentKind::clt: return "clt";
    case ExperimentKind::rate_dichotomy: return "rate-dichotomy";
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::identity_fuzz: return "identity-fuzz";
    }
    throw ValidationError("unknown experiment kind");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    switch (config.kind) {
    case ExperimentKind::chi2_null: return run_chi2_null(config);
    case ExperimentKind::clt: return run_clt(config);
    case ExperimentKind::rate_dichotomy: return run_rate_dichotomy(config);
    case ExperimentKind::coverage: return run_coverage(config);
    case ExperimentKind::identity_fuzz: return run_identity_fuzz(config);
    }
    throw ValidationError("unknown experiment kind");
}

void write_experiment_csv(const std::string& path, const ExperimentResult& result) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    for (std::size_t i = 0; i < result.columns.size(); ++i) {
        out << (i == 0 ? "" : ",") << result.columns[i];
    }
    out << '\n';
    char buffer[64];
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", row[i]);
            out << (i == 0 ? "" : ",") << buffer;
        }
        out << '\n';
    }
    for (const auto& [key, value] : result.summary) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", value);
        out << "# " << key << "=" << buffer << '\n';
    }
    if (!out) throw ValidationError("write failed: " + path);
}

std::string summary_to_json(const ExperimentResult& result) {
    nlohmann::ordered_json doc;
    for (const auto& [key, value] : result.summary) {
        doc[key] = value;
    }
    return doc.dump(2);
}

void parallel_for_trials(std::int64_t trials, int threads,
                         const std::function<void(std::int64_t)>& body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::int64_t>(
                                                     trials, 1024))));
    if (workers == 1) {
        for (std::int64_t i = 0; i < trials; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::int64_t i = next.fetch_add(1);
                if (i >= trials) break;
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("regression needs at least two matched points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace dirate
