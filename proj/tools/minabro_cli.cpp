// Command-line front end: train, calibrate, explain, verify, benchmark.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "minabro/baseline.hpp"
#include "minabro/calibration.hpp"
#include "minabro/dataset.hpp"
#include "minabro/explain.hpp"
#include "minabro/logistic.hpp"
#include "minabro/model_io.hpp"
#include "minabro/oracle.hpp"
#include "minabro/report.hpp"

namespace {

using namespace minabro;

constexpr int kExitInputError = 2;
constexpr int kExitVerificationFailed = 3;

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataArgs {
    std::string path;
    std::string label_col;
    char delimiter = ',';
    std::uint64_t seed = 0;
    double train_fraction = 0.7;
    std::string split = "test";

    CsvOptions csv() const {
        CsvOptions o;
        o.delimiter = delimiter;
        if (!label_col.empty()) o.label_column = label_col;
        return o;
    }
};

void add_data_options(CLI::App* cmd, DataArgs& args, bool with_split) {
    cmd->add_option("--label-col", args.label_col, "Label column name or index (default: last)");
    cmd->add_option("--delimiter", args.delimiter, "Field delimiter")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Seed for the stratified split")->capture_default_str();
    cmd->add_option("--train-fraction", args.train_fraction, "Training share of the split")
        ->check(CLI::Range(0.01, 0.99))
        ->capture_default_str();
    if (with_split) {
        cmd->add_option("--split", args.split, "Rows to use: train, test or all")
            ->check(CLI::IsMember({"train", "test", "all"}))
            ->capture_default_str();
    }
}

double epsilon_from_env() {
    if (const char* env = std::getenv("MINABRO_EPSILON")) {
        try {
            return std::stod(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("MINABRO_EPSILON is not a number: ") + env);
        }
    }
    return kDefaultEpsilon;
}

Dataset select_rows(const Dataset& data, const DataArgs& args) {
    if (args.split == "all") return data;
    auto [train, test] = stratified_split(data, args.train_fraction, args.seed);
    return args.split == "train" ? train : test;
}

Dataset scaled(const Dataset& data, const ModelFile& file) {
    if (data.cols() != file.model.num_features()) {
        throw std::invalid_argument("dataset has " + std::to_string(data.cols()) + " features, model expects " +
                                    std::to_string(file.model.num_features()));
    }
    return file.scaling ? file.scaling->apply(data) : data;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Rows (or instance-json entries) as candidate feature vectors in model space.
struct InstanceSource {
    std::vector<std::vector<double>> rows;
};

InstanceSource instances_from(const ModelFile& file, const std::string& data_path, const std::string& instance_json,
                              const DataArgs& args, std::size_t limit) {
    InstanceSource src;
    if (!instance_json.empty()) {
        std::ifstream in(instance_json);
        if (!in) throw std::invalid_argument("cannot open " + instance_json);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument("instance file is not valid JSON: " + std::string(e.what()));
        }
        if (doc.is_array() && !doc.empty() && doc.front().is_number()) doc = nlohmann::json::array({doc});
        if (!doc.is_array()) throw std::invalid_argument("instance file must hold an array of feature vectors");
        for (const auto& row : doc) {
            auto values = row.get<std::vector<double>>();
            if (file.scaling) values = file.scaling->apply(values);
            src.rows.push_back(std::move(values));
        }
    } else {
        const Dataset data = scaled(select_rows(load_dataset(data_path, args.csv()), args), file);
        for (std::size_t r = 0; r < data.rows(); ++r) {
            src.rows.emplace_back(data.row(r).begin(), data.row(r).end());
        }
    }
    if (limit > 0 && src.rows.size() > limit) src.rows.resize(limit);
    return src;
}

// ---------------------------------------------------------------- train

int run_train(const std::string& data_path, const DataArgs& args, const std::string& out_model, bool no_scale,
              const LogisticOptions& opts) {
    const Dataset data = load_dataset(data_path, args.csv());
    auto [train, test] = stratified_split(data, args.train_fraction, args.seed);

    std::optional<MinMaxScaling> scaling;
    std::optional<std::vector<FeatureDomain>> domains;
    if (!no_scale) {
        scaling = MinMaxScaling::fit(train);
        for (std::size_t c : scaling->constant_features()) {
            std::cerr << "warning: feature '" << train.feature_names[c] << "' is constant in training data; scaled to 0\n";
        }
        train = scaling->apply(train);
        test = scaling->apply(test);
        domains = std::vector<FeatureDomain>(train.cols(), FeatureDomain{0.0, 1.0});
    }
    const TrainResult result = train_logistic(train, opts, domains);
    if (!result.converged) {
        std::cerr << "warning: gradient norm " << result.gradient_norm << " above tolerance after "
                  << result.iterations << " iterations; keeping last iterate\n";
    }

    std::size_t correct = 0;
    const auto w = result.model.weights();
    for (std::size_t r = 0; r < test.rows(); ++r) {
        double s = result.model.bias();
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * test.row(r)[j];
        correct += (s > 0.0) == (test.labels[r] == 1);
    }
    save_model(ModelFile{result.model, std::nullopt, std::nullopt, scaling}, out_model);

    const double accuracy = test.rows() ? static_cast<double>(correct) / static_cast<double>(test.rows()) : 0.0;
    std::cout << "train rows: " << train.rows() << ", test rows: " << test.rows() << "\n"
              << "iterations: " << result.iterations << (result.converged ? " (converged)" : " (not converged)") << "\n"
              << "accuracy without reject option: " << accuracy << "\n"
              << "model written to " << out_model << "\n";
    return 0;
}

// ------------------------------------------------------------ calibrate

int run_calibrate(const std::string& model_path, const std::string& data_path, const DataArgs& args, double wr,
                  std::string out_model) {
    const RiskConfig config(wr);
    ModelFile file = load_model(model_path);
    const Dataset data = scaled(load_dataset(data_path, args.csv()), file);
    const auto [train, test] = stratified_split(data, args.train_fraction, args.seed);

    const auto scores_of = [&](const Dataset& d) {
        std::vector<double> s(d.rows());
        const auto w = file.model.weights();
        for (std::size_t r = 0; r < d.rows(); ++r) {
            double v = file.model.bias();
            for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * d.row(r)[j];
            s[r] = v;
        }
        return s;
    };
    const double eps = epsilon_from_env();
    const RiskReport fit = calibrate_thresholds(scores_of(train), train.labels, config, eps);
    file.t_minus = fit.t_minus;
    file.t_plus = fit.t_plus;
    if (out_model.empty()) out_model = model_path;
    save_model(file, out_model);

    const std::vector<double> test_scores = scores_of(test);
    const RejectClassifier clf(file.model, fit.t_minus, fit.t_plus, eps);
    std::size_t rejected = 0, accepted_correct = 0, plain_correct = 0;
    for (std::size_t i = 0; i < test_scores.size(); ++i) {
        const int y = test.labels[i];
        plain_correct += (test_scores[i] > 0.0) == (y == 1);
        const Label l = label_for_score(clf, test_scores[i]);
        if (l == Label::Reject) {
            ++rejected;
        } else {
            accepted_correct += (l == Label::Positive) == (y == 1);
        }
    }
    const double n = static_cast<double>(test_scores.size());
    const double accepted = n - static_cast<double>(rejected);
    std::cout << std::setprecision(6) << "t_plus: " << fit.t_plus << "\n"
              << "t_minus: " << fit.t_minus << "\n"
              << "rejection width: " << fit.t_plus - fit.t_minus << "\n"
              << "training risk: " << fit.empirical_risk << " (E=" << fit.error_ratio
              << ", R=" << fit.rejection_ratio << ", w_r=" << wr << ")\n"
              << "test rejection rate (%): " << (n > 0 ? 100.0 * rejected / n : 0.0) << "\n"
              << "test accuracy without reject option (%): " << (n > 0 ? 100.0 * plain_correct / n : 0.0) << "\n"
              << "test accuracy with reject option (%): "
              << (accepted > 0 ? 100.0 * accepted_correct / accepted : 0.0) << "\n"
              << "model written to " << out_model << "\n";
    return 0;
}

// -------------------------------------------------------------- explain

struct ExplainArgs {
    std::string model;
    std::string data;
    std::string instance_json;
    std::string method = "minabro";
    std::uint64_t node_limit = SolverLimits{}.node_limit;
    double time_limit = 30.0;
    std::string out_report;
    std::size_t limit = 0;
    std::size_t repeats = 1;
};

std::vector<ExplanationRecord> explain_all(const RejectClassifier& clf, const InstanceSource& src,
                                           const ExplainArgs& args, std::size_t& skipped) {
    SolverLimits limits;
    limits.node_limit = args.node_limit;
    limits.time_limit = std::chrono::duration<double>(args.time_limit);
    const bool run_minabro = args.method != "baseline";
    const bool run_baseline = args.method != "minabro";

    std::vector<ExplanationRecord> records;
    skipped = 0;
    for (std::size_t id = 0; id < src.rows.size(); ++id) {
        std::optional<Instance> instance;
        try {
            instance.emplace(clf.model(), src.rows[id]);
        } catch (const std::invalid_argument&) {
            ++skipped;
            continue;
        }
        const auto timed = [&](auto&& fn) {
            std::vector<double> times;
            decltype(fn()) result = fn();
            for (std::size_t rep = 0; rep < args.repeats; ++rep) {
                const auto start = std::chrono::steady_clock::now();
                result = fn();
                times.push_back(elapsed_ms(start));
            }
            std::nth_element(times.begin(), times.begin() + static_cast<long>(times.size() / 2), times.end());
            return std::make_pair(std::move(result), times[times.size() / 2]);
        };
        if (run_minabro) {
            auto [out, ms] = timed([&] { return explain(clf, *instance, limits); });
            records.push_back({id, out.prediction.label, out.prediction.score, out.explanation, Method::Minabro, ms,
                               out.nodes,
                               touches_threshold(clf, *instance, out.explanation.indices, out.explanation.kind)});
        }
        if (run_baseline) {
            auto [e, ms] = timed([&] { return subset_minimal_explanation(clf, *instance); });
            const Prediction p = predict(clf, *instance);
            const bool tight = touches_threshold(clf, *instance, e.indices, e.kind);
            records.push_back({id, p.label, p.score, std::move(e), Method::Baseline, ms, std::nullopt, tight});
        }
    }
    return records;
}

void print_summary(const ReportAggregate& agg) {
    std::cout << std::fixed << std::setprecision(3);
    for (Method m : {Method::Minabro, Method::Baseline}) {
        for (bool rej : {false, true}) {
            const GroupStats& g = agg.get(m, rej);
            if (g.count == 0) continue;
            std::cout << to_string(m) << (rej ? " rejected  " : " classified") << ": n=" << g.count
                      << " size " << g.size_mean << " +- " << g.size_std << ", time " << g.time_mean_ms << " +- "
                      << g.time_std_ms << " ms\n";
        }
    }
    if (agg.skipped_out_of_domain > 0) {
        std::cout << "skipped (outside model domains): " << agg.skipped_out_of_domain << "\n";
    }
}

int run_explain(const ExplainArgs& args, const DataArgs& data_args, bool timing_note) {
    if (args.data.empty() == args.instance_json.empty()) {
        throw std::invalid_argument("give exactly one of --data or --instance-json");
    }
    const ModelFile file = load_model(args.model);
    const RejectClassifier clf = file.classifier(epsilon_from_env());
    const InstanceSource src = instances_from(file, args.data, args.instance_json, data_args, args.limit);

    std::size_t skipped = 0;
    const auto records = explain_all(clf, src, args, skipped);
    ReportOptions opts;
    opts.skipped_out_of_domain = skipped;
    if (!args.out_report.empty()) {
        write_explanation_report(records, args.out_report, opts);
    } else {
        std::cout << format_report(records, opts);
    }
    if (timing_note && args.repeats == 1) {
        std::cout << "note: repeats=1, each time is a single measurement\n";
    }
    print_summary(aggregate(records, skipped));
    return 0;
}

// --------------------------------------------------------------- verify

int run_verify(const std::string& model_path, const std::string& data_path, const DataArgs& data_args,
               std::size_t max_n, std::size_t cases, std::uint64_t seed) {
    if (max_n > kOracleMaxFeatures) {
        throw std::invalid_argument("--max-n above " + std::to_string(kOracleMaxFeatures) + " is not supported");
    }
    OracleSuiteSummary summary;
    if (!model_path.empty() || !data_path.empty()) {
        if (model_path.empty() || data_path.empty()) throw std::invalid_argument("--model and --data go together");
        const ModelFile file = load_model(model_path);
        const RejectClassifier clf = file.classifier(epsilon_from_env());
        if (clf.num_features() > max_n) {
            throw std::invalid_argument("model has " + std::to_string(clf.num_features()) + " features, above --max-n");
        }
        const InstanceSource src = instances_from(file, data_path, "", data_args, cases);
        std::vector<RandomCase> provided;
        for (const auto& row : src.rows) {
            try {
                provided.push_back(RandomCase{clf, Instance(clf.model(), row)});
            } catch (const std::invalid_argument&) {
            }
        }
        summary = check_against_oracle(provided);
    } else {
        if (cases == 0) std::cerr << "warning: --cases 0, nothing to verify\n";
        OracleSuiteConfig cfg;
        cfg.classified_cases = cases;
        cfg.rejected_cases = cases;
        cfg.max_features = max_n;
        cfg.seed = seed;
        summary = run_oracle_suite(cfg);
    }
    for (const auto& m : summary.mismatches) std::cout << "mismatch: " << m << "\n";
    std::cout << summary.classified_agree << "/" << summary.classified_total << " classified, "
              << summary.rejected_agree << "/" << summary.rejected_total << " rejected agree\n";
    if (!summary.all_agree()) throw VerificationFailure("explainer disagrees with brute force");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-size abductive explanations for linear classifiers with a reject option"};
    app.require_subcommand(1);

    DataArgs data_args;
    std::string data_path, model_path, out_model;

    auto* train = app.add_subcommand("train", "Fit a logistic regression model on a stratified split");
    bool no_scale = false;
    LogisticOptions lopts;
    train->add_option("--data", data_path, "CSV dataset with header")->required();
    train->add_option("--out-model", out_model, "Output model file")->required();
    train->add_flag("--no-scale", no_scale, "Skip min-max scaling");
    train->add_option("--l2", lopts.l2, "L2 penalty")->capture_default_str();
    train->add_option("--max-iter", lopts.max_iterations, "Iteration cap")->capture_default_str();
    add_data_options(train, data_args, false);

    auto* calibrate = app.add_subcommand("calibrate", "Fit rejection thresholds on the training split");
    double wr = 0.24;
    calibrate->add_option("--model", model_path, "Model file")->required();
    calibrate->add_option("--data", data_path, "CSV dataset used for training")->required();
    calibrate->add_option("--wr", wr, "Rejection cost in (0, 1]")->capture_default_str();
    calibrate->add_option("--out-model", out_model, "Output model file (default: overwrite --model)");
    add_data_options(calibrate, data_args, false);

    ExplainArgs ex;
    const auto add_explain_options = [&](CLI::App* cmd, bool benchmark) {
        cmd->add_option("--model", ex.model, "Calibrated model file")->required();
        cmd->add_option("--data", ex.data, "CSV dataset");
        if (!benchmark) cmd->add_option("--instance-json", ex.instance_json, "JSON feature vector(s)");
        cmd->add_option("--method", ex.method, "minabro, baseline or both")
            ->check(CLI::IsMember({"minabro", "baseline", "both"}))
            ->capture_default_str();
        cmd->add_option("--node-limit", ex.node_limit, "Branch-and-bound node budget")->capture_default_str();
        cmd->add_option("--time-limit", ex.time_limit, "Per-instance solver time budget (s)")->capture_default_str();
        cmd->add_option("--out-report", ex.out_report, "Report file (default: stdout)");
        cmd->add_option("--limit", ex.limit, "Explain at most this many instances (0 = all)");
        add_data_options(cmd, data_args, true);
    };
    auto* explain_cmd = app.add_subcommand("explain", "Explain predictions");
    add_explain_options(explain_cmd, false);

    auto* bench = app.add_subcommand("benchmark", "Time explanations (median of repeats)");
    add_explain_options(bench, true);
    bench->add_option("--repeats", ex.repeats, "Timed runs per instance")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Compare explainers with brute force");
    std::size_t max_n = 12, cases = 500;
    std::uint64_t verify_seed = 1;
    verify->add_option("--model", model_path, "Model file (optional)");
    verify->add_option("--data", data_path, "CSV dataset (optional, with --model)");
    verify->add_option("--max-n", max_n, "Largest feature count")->capture_default_str();
    verify->add_option("--cases", cases, "Cases per group")->capture_default_str();
    verify->add_option("--seed", verify_seed, "Generator seed")->capture_default_str();
    verify->add_option("--label-col", data_args.label_col, "Label column name or index");
    verify->add_option("--split", data_args.split, "Rows to use: train, test or all")
        ->check(CLI::IsMember({"train", "test", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*train) return run_train(data_path, data_args, out_model, no_scale, lopts);
        if (*calibrate) return run_calibrate(model_path, data_path, data_args, wr, out_model);
        if (*explain_cmd) return run_explain(ex, data_args, false);
        if (*bench) {
            if (ex.data.empty()) throw std::invalid_argument("benchmark needs --data");
            if (ex.method == "minabro") ex.method = "both";
            return run_explain(ex, data_args, true);
        }
        if (*verify) return run_verify(model_path, data_path, data_args, max_n, cases, verify_seed);
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerificationFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
