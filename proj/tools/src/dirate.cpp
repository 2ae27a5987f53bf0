// Command-line front end: simulate models, estimate information rates,
// run causality/independence tests, compute asymptotic variances, and
// drive the Monte Carlo conformance experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirate/estimators.hpp"
#include "dirate/experiments.hpp"
#include "dirate/inference.hpp"
#include "dirate/info.hpp"
#include "dirate/model_io.hpp"
#include "dirate/sequence_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitReject = 3;

dirate::SequenceFormat parse_format(const std::string& name) {
    if (name == "auto") return dirate::SequenceFormat::auto_detect;
    if (name == "csv") return dirate::SequenceFormat::csv;
    if (name == "ws") return dirate::SequenceFormat::whitespace;
    throw dirate::ValidationError("unknown format: " + name + " (expected auto|csv|ws)");
}

// Alphabet sizes may be declared; otherwise they are inferred as
// max(symbol)+1, which matters for degrees of freedom.
dirate::SymbolSequencePair load_data(const std::string& path, const std::string& format,
                                     int k, int m, int ell) {
    if (m > 0 && ell > 0) {
        return dirate::load_sequences(path, parse_format(format), dirate::Alphabet{m},
                                      dirate::Alphabet{ell}, k);
    }
    // Two passes: a generous first load to find the symbol ranges.
    dirate::SymbolSequencePair wide = dirate::load_sequences(
        path, parse_format(format), dirate::Alphabet{1 << 20}, dirate::Alphabet{1 << 20}, k);
    int max_x = 0, max_y = 0;
    for (int s : wide.x()) max_x = std::max(max_x, s);
    for (int s : wide.y()) max_y = std::max(max_y, s);
    return dirate::SymbolSequencePair(wide.x(), wide.y(),
                                      dirate::Alphabet{m > 0 ? m : max_x + 1},
                                      dirate::Alphabet{ell > 0 ? ell : max_y + 1}, k);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw dirate::ValidationError("cannot open output file: " + path);
    out << text << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plug-in estimation of mutual/directed information rates of finite-alphabet "
                 "Markov chains, with likelihood-ratio causality tests"};
    app.require_subcommand(1);

    std::string model_path, data_path, out_path, format = "auto", kind_name, n_grid_text,
                column = "x";
    std::int64_t n = 0, trials = 1000;
    std::uint64_t seed = 0;
    int k = 1, m = 0, ell = 0, threads = 0;
    double alpha = 0.05, level = 0.95;
    bool use_mi = false, use_di = false, bits = false;

    auto add_mi_di = [&](CLI::App* cmd) {
        auto* mi = cmd->add_flag("--mi", use_mi, "mutual-information functional");
        auto* di = cmd->add_flag("--di", use_di, "directed-information functional (default)");
        mi->excludes(di);
    };

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "sample a path from a joint model");
    cmd_simulate->add_option("--model", model_path, "joint model JSON file")->required();
    cmd_simulate->add_option("--n", n, "number of transitions")->required();
    cmd_simulate->add_option("--seed", seed, "random seed");
    cmd_simulate->add_option("--out", out_path, "output sequence file")->required();

    CLI::App* cmd_estimate = app.add_subcommand("estimate", "plug-in information estimate");
    cmd_estimate->add_option("--data", data_path, "sequence file")->required();
    cmd_estimate->add_option("--k", k, "memory length");
    cmd_estimate->add_option("--m", m, "alphabet size of x (default: inferred)");
    cmd_estimate->add_option("--ell", ell, "alphabet size of y (default: inferred)");
    cmd_estimate->add_option("--format", format, "data format: auto|csv|ws");
    cmd_estimate->add_option("--column", column, "column for --mi: x|y");
    cmd_estimate->add_flag("--bits", bits, "report bits instead of nats");
    add_mi_di(cmd_estimate);

    CLI::App* cmd_test = app.add_subcommand(
        "test", "likelihood-ratio test; exit 0 = retain, 3 = reject, 1 = error");
    cmd_test->add_option("--data", data_path, "sequence file")->required();
    cmd_test->add_option("--k", k, "memory length");
    cmd_test->add_option("--m", m, "alphabet size of x (default: inferred)");
    cmd_test->add_option("--ell", ell, "alphabet size of y (default: inferred)");
    cmd_test->add_option("--alpha", alpha, "significance level");
    cmd_test->add_option("--format", format, "data format: auto|csv|ws");
    cmd_test->add_option("--column", column, "column for --mi: x|y");
    cmd_test->add_option("--out", out_path, "report JSON file");
    add_mi_di(cmd_test);

    CLI::App* cmd_variance = app.add_subcommand(
        "variance", "exact asymptotic variance of a model (Poisson equation)");
    cmd_variance->add_option("--model", model_path, "model JSON file")->required();
    cmd_variance->add_flag("--bits", bits, "report bits^2 instead of nats^2");
    add_mi_di(cmd_variance);

    CLI::App* cmd_experiment = app.add_subcommand("experiment", "Monte Carlo conformance runs");
    cmd_experiment
        ->add_option("--kind", kind_name,
                     "chi2-null | clt | rate-dichotomy | coverage | identity-fuzz")
        ->required();
    cmd_experiment->add_option("--model", model_path, "model JSON file");
    cmd_experiment->add_option("--trials", trials, "trials per grid point");
    cmd_experiment->add_option("--n", n, "sample size");
    cmd_experiment->add_option("--n-grid", n_grid_text, "comma-separated increasing sizes");
    cmd_experiment->add_option("--seed", seed, "master seed");
    cmd_experiment->add_option("--alpha", alpha, "significance level");
    cmd_experiment->add_option("--level", level, "confidence level (coverage)");
    cmd_experiment->add_option("--threads", threads, "worker threads (0 = all cores)");
    cmd_experiment->add_option("--out", out_path, "per-trial CSV output")->required();
    add_mi_di(cmd_experiment);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    const bool mi = use_mi && !use_di;
    const double unit = bits ? std::numbers::ln2 : 1.0;
    const char* unit_name = bits ? "bits" : "nats";

    try {
        if (app.got_subcommand(cmd_simulate)) {
            dirate::JointMarkovModel model = dirate::load_joint_model(model_path);
            dirate::save_sequences(out_path, dirate::simulate(model, n, seed));
            return kExitOk;
        }

        if (app.got_subcommand(cmd_estimate)) {
            dirate::SymbolSequencePair pair = load_data(data_path, format, k, m, ell);
            nlohmann::ordered_json doc;
            if (mi) {
                dirate::SymbolSequence seq = dirate::univariate_view(
                    pair, column == "y" ? dirate::Column::y : dirate::Column::x);
                dirate::MiEstimate est = dirate::plugin_mi(seq);
                doc["functional"] = "mi";
                doc["estimate"] = est.i_hat / unit;
                doc["units"] = unit_name;
                doc["n"] = est.n;
                doc["m"] = est.m;
            } else {
                dirate::DiEstimate est = dirate::plugin_di(pair);
                doc["functional"] = "di";
                doc["estimate"] = est.i_hat / unit;
                doc["units"] = unit_name;
                doc["n"] = est.n;
                doc["k"] = est.k;
                doc["m"] = est.m;
                doc["ell"] = est.ell;
            }
            std::cout << doc.dump(2) << '\n';
            return kExitOk;
        }

        if (app.got_subcommand(cmd_test)) {
            dirate::SymbolSequencePair pair = load_data(data_path, format, k, m, ell);
            dirate::TestReport report;
            if (mi) {
                dirate::SymbolSequence seq = dirate::univariate_view(
                    pair, column == "y" ? dirate::Column::y : dirate::Column::x);
                report = dirate::test_independence_markov(seq, alpha);
            } else {
                report = dirate::test_causality(pair, alpha);
            }
            std::string json = dirate::report_to_json(report);
            if (!out_path.empty()) write_text(out_path, json);
            std::cout << json << '\n';
            return report.reject ? kExitReject : kExitOk;
        }

        if (app.got_subcommand(cmd_variance)) {
            nlohmann::ordered_json doc;
            double sigma_sq = 0.0;
            if (mi) {
                sigma_sq = dirate::sigma_sq_mi(dirate::load_univariate_model(model_path));
                doc["functional"] = "mi";
            } else {
                sigma_sq = dirate::sigma_sq_di(dirate::load_joint_model(model_path));
                doc["functional"] = "di";
            }
            doc["sigma_sq"] = sigma_sq / (unit * unit);
            doc["sigma"] = std::sqrt(sigma_sq) / unit;
            doc["units"] = unit_name;
            std::cout << doc.dump(2) << '\n';
            return kExitOk;
        }

        if (app.got_subcommand(cmd_experiment)) {
            dirate::ExperimentConfig config;
            config.kind = dirate::parse_experiment_kind(kind_name);
            config.functional = mi ? dirate::Functional::mi : dirate::Functional::di;
            config.trials = trials;
            config.seed = seed;
            config.alpha = alpha;
            config.level = level;
            config.threads = threads;
            if (!n_grid_text.empty()) {
                std::stringstream ss(n_grid_text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    config.n_grid.push_back(std::stoll(item));
                }
            } else if (n > 0) {
                config.n_grid.push_back(n);
            }
            if (!model_path.empty()) {
                if (mi) {
                    config.univariate_model = dirate::load_univariate_model(model_path);
                } else {
                    config.joint_model = dirate::load_joint_model(model_path);
                }
            }
            dirate::ExperimentResult result = dirate::run_experiment(config);
            dirate::write_experiment_csv(out_path, result);
            std::cout << dirate::summary_to_json(result) << '\n';
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
