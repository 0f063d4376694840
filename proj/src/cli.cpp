#include "nids/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "nids/dataset.hpp"
#include "nids/errors.hpp"
#include "nids/featsel.hpp"
#include "nids/model_io.hpp"
#include "nids/report.hpp"
#include "nids/textio.hpp"

#ifdef NIDS_HAVE_OPENSSL
#include <openssl/evp.h>
#endif
#include "httplib.h"

namespace nids {

namespace {

struct CommonOptions {
    std::string data_path;
    std::string test_path;
    std::string model_path;
    std::string out_path;
    std::string labels = "binary";
    int folds = 10;
    std::uint64_t seed = 1;
    std::string algo = "nb";

    // algorithm knobs
    double alpha = 1.0;
    int bins = 10;
    std::string disc_method = "equal-width";
    std::size_t max_parents = 3;
    int trees = 100;
    double bag_fraction = 0.66;
    bool with_replacement = false;
    int k_features = 0;
    int min_leaf = 1;
    int max_depth = 0;
    std::string fusion = "anomaly-union";
};

LabelMode parse_labels(const std::string& name) {
    if (name == "binary") return LabelMode::Binary;
    if (name == "category5") return LabelMode::Category5;
    throw UsageError("--labels must be binary or category5");
}

AlgorithmOptions to_algorithm_options(const CommonOptions& options) {
    AlgorithmOptions algo;
    algo.alpha = options.alpha;
    algo.disc_method = parse_discretize_method(options.disc_method);
    algo.bins = options.bins;
    algo.max_parents = options.max_parents;
    algo.tree.k_features = options.k_features;
    algo.tree.min_leaf = options.min_leaf;
    algo.tree.max_depth = options.max_depth;
    algo.forest.tree_count = options.trees;
    algo.forest.bag_fraction = options.bag_fraction;
    algo.forest.with_replacement = options.with_replacement;
    algo.forest.r_features = options.k_features;
    algo.forest.min_leaf = options.min_leaf;
    algo.fusion = parse_fusion_rule(options.fusion);
    algo.seed = options.seed;
    return algo;
}

std::map<std::string, std::string> config_echo(const CommonOptions& options) {
    return {{"algorithm", options.algo},
            {"labels", options.labels},
            {"seed", std::to_string(options.seed)},
            {"alpha", format_double(options.alpha)},
            {"bins", std::to_string(options.bins)},
            {"disc-method", options.disc_method},
            {"max-parents", std::to_string(options.max_parents)},
            {"trees", std::to_string(options.trees)},
            {"bag-fraction", format_double(options.bag_fraction)},
            {"with-replacement", options.with_replacement ? "1" : "0"},
            {"k-features", std::to_string(options.k_features)},
            {"min-leaf", std::to_string(options.min_leaf)},
            {"max-depth", std::to_string(options.max_depth)},
            {"fusion", options.fusion}};
}

Dataset load_any(const std::string& path, const std::string& labels) {
    if (path.empty()) throw UsageError("--data is required");
    if (std::filesystem::path(path).extension() == ".arff") {
        return load_arff(path);
    }
    const LabelMode mode = parse_labels(labels);
    return load_csv(path, nsl_kdd_schema(mode), mode);
}

void add_common_flags(CLI::App* cmd, CommonOptions& options, bool with_algo_flags = true) {
    cmd->add_option("--data", options.data_path, "training data (CSV or .arff)");
    cmd->add_option("--labels", options.labels, "binary|category5 (CSV loading)");
    cmd->add_option("--seed", options.seed, "random seed");
    cmd->add_option("--folds", options.folds, "cross-validation folds");
    cmd->add_option("--out", options.out_path, "output path");
    if (!with_algo_flags) return;
    cmd->add_option("--algo", options.algo, "nb|nb-disc|k2bn|rtree|rforest|combined");
    cmd->add_option("--alpha", options.alpha, "Laplace/Dirichlet smoothing");
    cmd->add_option("--bins", options.bins, "discretization bins");
    cmd->add_option("--disc-method", options.disc_method,
                    "equal-width|equal-frequency|entropy-mdl");
    cmd->add_option("--max-parents", options.max_parents, "K2 parent cap per node");
    cmd->add_option("--trees", options.trees, "forest size");
    cmd->add_option("--bag-fraction", options.bag_fraction, "per-tree sample fraction");
    cmd->add_flag("--with-replacement", options.with_replacement,
                  "bootstrap-style bagging instead of subsampling");
    cmd->add_option("--k-features", options.k_features,
                    "candidate features per node (0 = auto)");
    cmd->add_option("--min-leaf", options.min_leaf, "minimum records per node");
    cmd->add_option("--max-depth", options.max_depth, "tree depth cap (0 = none)");
    cmd->add_option("--fusion", options.fusion, "anomaly-union|majority-vote|average-probability");
}

void validate_algo(const std::string& algo) {
    for (const auto& known : known_algorithms()) {
        if (algo == known) return;
    }
    throw UsageError("unknown algorithm '" + algo + "' (expected one of: nb nb-disc k2bn "
                     "rtree rforest combined)");
}

int cmd_train(const CommonOptions& options) {
    validate_algo(options.algo);
    if (options.model_path.empty()) throw UsageError("--model output path is required");
    Dataset ds = load_any(options.data_path, options.labels);

    auto learner = make_learner(options.algo, to_algorithm_options(options));
    const auto t0 = std::chrono::steady_clock::now();
    auto model = learner->train_model(ds);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    save_model(options.model_path, *model, ds.schema, options.seed, config_echo(options));
    std::cout << "Model Building Time               " << format_double(seconds)
              << " seconds\n";
    std::cout << "model written to " << options.model_path << '\n';
    return 0;
}

int cmd_crossval(const CommonOptions& options) {
    validate_algo(options.algo);
    if (options.folds < 2) throw UsageError("--folds must be at least 2");
    Dataset ds = load_any(options.data_path, options.labels);

    auto learner = make_learner(options.algo, to_algorithm_options(options));
    EvalReport report = cross_validate(*learner, ds, options.folds, options.seed);
    std::cout << render_report_text(options.algo + " (" + std::to_string(options.folds) +
                                        "-fold cross-validation, seed " +
                                        std::to_string(options.seed) + ")",
                                    report);
    if (!options.out_path.empty()) {
        write_file_atomic(options.out_path,
                          report_csv_header() + report_csv_row(options.algo, report));
        write_file_atomic(options.out_path + ".timing.csv",
                          timing_csv_header() + timing_csv_row(options.algo, report));
    }
    return 0;
}

// Loads test data for a saved model. CSV implies the canonical schema for
// --labels, checked against the model's training schema before parsing;
// ARFF brings its own header, checked after. A mismatch is a model error
// (exit 3).
Dataset load_test_for(const LoadedModel& model, const CommonOptions& options) {
    Dataset test;
    if (std::filesystem::path(options.test_path).extension() == ".arff") {
        test = load_arff(options.test_path);
        if (test.schema.fingerprint() != model.schema.fingerprint()) {
            throw ModelError("test data schema does not match the model's training schema");
        }
        return test;
    }
    const LabelMode mode = parse_labels(options.labels);
    const FeatureSchema schema = nsl_kdd_schema(mode);
    if (schema.fingerprint() != model.schema.fingerprint()) {
        throw ModelError("test data schema (--labels " + options.labels +
                         ") does not match the model's training schema");
    }
    return load_csv(options.test_path, schema, mode);
}

int cmd_eval(const CommonOptions& options) {
    if (options.model_path.empty()) throw UsageError("--model is required");
    if (options.test_path.empty()) throw UsageError("--test is required");
    LoadedModel model = load_model(options.model_path);
    Dataset test = load_test_for(model, options);

    std::vector<Prediction> predictions;
    std::vector<std::pair<int, int>> pairs;
    for (const auto& rec : test.records) {
        Prediction p{rec.label, model.classifier->predict(rec)};
        pairs.push_back({p.actual, p.predicted()});
        predictions.push_back(std::move(p));
    }
    EvalReport report = metrics(confusion(pairs, test.schema.class_values()), predictions);
    std::cout << render_report_text(model.algorithm + " (holdout evaluation)", report,
                                    /*include_time=*/false);
    if (!options.out_path.empty()) {
        write_file_atomic(options.out_path,
                          report_csv_header() + report_csv_row(model.algorithm, report));
    }
    return 0;
}

int cmd_roc(const CommonOptions& options, const std::string& positive_label) {
    if (options.model_path.empty()) throw UsageError("--model is required");
    if (options.test_path.empty()) throw UsageError("--test is required");
    LoadedModel model = load_model(options.model_path);
    Dataset test = load_test_for(model, options);
    const int positive = test.schema.class_index(positive_label);
    if (positive < 0) throw UsageError("positive label '" + positive_label + "' not in schema");

    std::vector<std::pair<double, bool>> scored;
    for (const auto& rec : test.records) {
        scored.push_back(
            {model.classifier->score(rec)[positive], rec.label == positive});
    }
    RocCurve curve = roc_points(scored);
    std::cout << "AUC " << format_double(curve.auc) << '\n';
    if (!options.out_path.empty()) write_file_atomic(options.out_path, roc_csv(curve));
    return 0;
}

int cmd_rank(const CommonOptions& options) {
    Dataset ds = load_any(options.data_path, options.labels);
    FeatureRanking ranking = info_gain_rank(ds);
    const std::string csv = ranking_csv(ranking, ds.schema);
    std::cout << csv;
    if (!options.out_path.empty()) write_file_atomic(options.out_path, csv);
    return 0;
}

int cmd_wrapper(const CommonOptions& options, const std::string& strategy,
                std::size_t max_features, int final_folds) {
    Dataset ds = load_any(options.data_path, options.labels);
    WrapperOptions wrapper;
    wrapper.folds = options.folds;
    wrapper.seed = options.seed;
    wrapper.max_features = max_features;
    if (strategy == "greedy") {
        wrapper.strategy = WrapperStrategy::GreedyForward;
    } else if (strategy == "best-first") {
        wrapper.strategy = WrapperStrategy::BestFirst;
    } else {
        throw UsageError("--strategy must be greedy or best-first");
    }

    auto evaluator = make_learner("nb", to_algorithm_options(options));
    FeatureSubset subset = wrapper_search(ds, *evaluator, wrapper);
    const double final_score =
        cross_validate(*evaluator, project(ds, subset.indices), final_folds, options.seed)
            .accuracy;

    std::cout << "selected features:";
    for (std::size_t f : subset.indices) {
        std::cout << ' ' << f << " (" << ds.schema.feature(f).name << ")";
    }
    std::cout << "\nsearch accuracy (" << options.folds << "-fold)  "
              << format_double(subset.achieved_score) << '\n';
    std::cout << "final accuracy (" << final_folds << "-fold)   " << format_double(final_score)
              << '\n';
    if (!options.out_path.empty()) {
        write_file_atomic(options.out_path, subset_csv(subset, ds.schema, final_score));
    }
    return 0;
}

int cmd_report(const CommonOptions& options) {
    if (options.folds < 2) throw UsageError("--folds must be at least 2");
    Dataset ds = load_any(options.data_path, options.labels);

    std::string csv = report_csv_header();
    std::string timing = timing_csv_header();
    auto emit = [&](const std::string& name, const EvalReport& report) {
        std::cout << render_report_text(name, report) << '\n';
        csv += report_csv_row(name, report);
        timing += timing_csv_row(name, report);
    };

    const AlgorithmOptions algo_options = to_algorithm_options(options);
    for (const auto& algo : known_algorithms()) {
        auto learner = make_learner(algo, algo_options);
        if (algo == "combined") {
            // cross-validated plus the two resubstitution modes
            emit("combined-cv", cross_validate(*learner, ds, options.folds, options.seed));

            const auto t0 = std::chrono::steady_clock::now();
            auto model = learner->train_model(ds);
            const double build =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            auto resubstitution = [&](const Dataset& data, const std::string& name) {
                std::vector<Prediction> predictions;
                std::vector<std::pair<int, int>> pairs;
                for (const auto& rec : data.records) {
                    Prediction p{rec.label, model->predict(rec)};
                    pairs.push_back({p.actual, p.predicted()});
                    predictions.push_back(std::move(p));
                }
                EvalReport r =
                    metrics(confusion(pairs, data.schema.class_values()), predictions);
                r.build_time_seconds = build;
                emit(name, r);
            };
            resubstitution(ds, "combined-resubstitution-full");
            resubstitution(sample_fraction(ds, 0.2, options.seed, true),
                           "combined-resubstitution-20pct");
        } else {
            emit(algo + "-cv", cross_validate(*learner, ds, options.folds, options.seed));
        }
    }
    if (!options.out_path.empty()) {
        write_file_atomic(options.out_path, csv);
        write_file_atomic(options.out_path + ".timing.csv", timing);
    }
    return 0;
}

#ifdef NIDS_HAVE_OPENSSL
std::string sha256_hex(const std::string& content) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(content.data(), content.size(), digest, &length, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}
#endif

int cmd_fetch(const std::string& url, const std::string& out_path,
              const std::string& expected_sha256) {
    // split scheme://host/path
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw UsageError("--url must include a scheme");
    const std::string scheme = url.substr(0, scheme_end);
    const auto host_start = scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    const std::string host = url.substr(host_start, path_start - host_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    std::string body;
    auto download = [&](auto& client) -> bool {
        client.set_follow_location(true);
        client.set_connection_timeout(30);
        client.set_read_timeout(120);
        auto res = client.Get(path);
        if (!res || res->status != 200) return false;
        body = std::move(res->body);
        return true;
    };
    bool ok = false;
    if (scheme == "http") {
        httplib::Client client(host);
        ok = download(client);
#ifdef NIDS_HAVE_OPENSSL
    } else if (scheme == "https") {
        httplib::SSLClient client(host);
        client.enable_server_certificate_verification(false);
        ok = download(client);
#endif
    } else {
        throw UsageError("unsupported URL scheme '" + scheme + "'");
    }
    if (!ok) throw DataError("download failed: " + url);

#ifdef NIDS_HAVE_OPENSSL
    const std::string digest = sha256_hex(body);
    if (!expected_sha256.empty()) {
        if (digest != to_lower(expected_sha256)) {
            throw DataError("sha256 mismatch: expected " + expected_sha256 + ", got " + digest);
        }
        std::cout << "sha256 verified: " << digest << '\n';
    } else {
        std::cout << "sha256 (unverified): " << digest << '\n';
    }
#else
    if (!expected_sha256.empty()) {
        throw UsageError("checksum verification unavailable in this build");
    }
#endif
    if (auto dir = std::filesystem::path(out_path).parent_path(); !dir.empty()) {
        std::filesystem::create_directories(dir);
    }
    write_file_atomic(out_path, body);
    std::cout << "wrote " << body.size() << " bytes to " << out_path << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"network intrusion detection classifier toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CommonOptions options;

    CLI::App* train = app.add_subcommand("train", "train a model and write it to disk");
    add_common_flags(train, options);
    train->add_option("--model", options.model_path, "model output path");

    CLI::App* crossval = app.add_subcommand("crossval", "k-fold cross-validation report");
    add_common_flags(crossval, options);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a saved model on a test set");
    add_common_flags(eval, options);
    eval->add_option("--model", options.model_path, "model path");
    eval->add_option("--test", options.test_path, "test data path");

    std::string positive_label = "anomaly";
    CLI::App* roc = app.add_subcommand("roc", "threshold sweep CSV for a saved model");
    add_common_flags(roc, options);
    roc->add_option("--model", options.model_path, "model path");
    roc->add_option("--test", options.test_path, "test data path");
    roc->add_option("--positive", positive_label, "positive class label");

    CLI::App* rank = app.add_subcommand("rank", "information-gain feature ranking CSV");
    add_common_flags(rank, options, /*with_algo_flags=*/false);

    std::string strategy = "greedy";
    std::size_t max_features = 0;
    int final_folds = 10;
    CLI::App* wrapper = app.add_subcommand("wrapper", "wrapper feature-subset search");
    add_common_flags(wrapper, options);
    wrapper->add_option("--strategy", strategy, "greedy|best-first");
    wrapper->add_option("--max-features", max_features, "subset size cap (0 = none)");
    wrapper->add_option("--final-folds", final_folds, "folds for the final re-evaluation");

    CLI::App* report = app.add_subcommand("report", "run all algorithms, one comparison table");
    add_common_flags(report, options);

    std::string url =
        "https://raw.githubusercontent.com/defcom17/NSL_KDD/master/KDDTrain%2B.txt";
    std::string fetch_out = "data/KDDTrain+.txt";
    std::string sha256;
    CLI::App* fetch = app.add_subcommand("fetch-dataset", "download the training data");
    fetch->add_option("--url", url, "source URL");
    fetch->add_option("--out", fetch_out, "destination path");
    fetch->add_option("--sha256", sha256, "expected checksum (verified when given)");

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) return cmd_train(options);
        if (crossval->parsed()) return cmd_crossval(options);
        if (eval->parsed()) return cmd_eval(options);
        if (roc->parsed()) return cmd_roc(options, positive_label);
        if (rank->parsed()) return cmd_rank(options);
        if (wrapper->parsed()) return cmd_wrapper(options, strategy, max_features, final_folds);
        if (report->parsed()) return cmd_report(options);
        if (fetch->parsed()) return cmd_fetch(url, fetch_out, sha256);
        throw UsageError("no command given");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace nids
