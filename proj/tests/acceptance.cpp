// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
// Criteria that need the real training file (KDDTrain+.txt) look for it at
// --data, $NIDS_DATA, ./data/KDDTrain+.txt or ../data/KDDTrain+.txt and are
// SKIPPED when absent (fetch it with `nids fetch-dataset`). Oracle and
// property criteria always run. Exit code is 1 if any criterion FAILs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "nids/bayes_net.hpp"
#include "nids/dataset.hpp"
#include "nids/discretize.hpp"
#include "nids/ensemble.hpp"
#include "nids/errors.hpp"
#include "nids/eval.hpp"
#include "nids/featsel.hpp"
#include "nids/junction_tree.hpp"
#include "nids/learners.hpp"
#include "nids/model_io.hpp"
#include "nids/naive_bayes.hpp"
#include "nids/report.hpp"
#include "nids/rng.hpp"
#include "nids/textio.hpp"
#include "nids/trees.hpp"

using namespace nids;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Suite {
    int passed = 0, failed = 0, skipped = 0;

    void check(const std::string& id, bool ok, const std::string& details) {
        std::cout << (ok ? "PASS  " : "FAIL  ") << id << "  " << details << '\n';
        (ok ? passed : failed)++;
    }
    void skip(const std::string& id, const std::string& reason) {
        std::cout << "SKIP  " << id << "  " << reason << '\n';
        skipped++;
    }
};

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
    return buf;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::optional<std::string> locate_dataset(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--data") == 0) return std::string(argv[i + 1]);
    }
    if (const char* env = std::getenv("NIDS_DATA")) return std::string(env);
    for (const char* candidate : {"data/KDDTrain+.txt", "../data/KDDTrain+.txt"}) {
        if (std::filesystem::exists(candidate)) return std::string(candidate);
    }
    return std::nullopt;
}

// Synthetic canonical-schema data for the dataset-free determinism runs.
Dataset synthetic_kdd(std::size_t rows, std::uint64_t seed) {
    const FeatureSchema schema = nsl_kdd_schema(LabelMode::Binary);
    Dataset ds;
    ds.schema = schema;
    Rng rng(seed);
    for (std::size_t i = 0; i < rows; ++i) {
        const bool anomaly = i % 2 == 1;
        Record rec;
        rec.values.assign(41, 0.0);
        rec.values[0] = double(rng.next_below(anomaly ? 5000 : 300));
        rec.values[1] = anomaly ? 2.0 : double(rng.next_below(2));
        rec.values[2] = anomaly ? double(9 + rng.next_below(4)) : double(rng.next_below(5));
        rec.values[3] = anomaly ? double(1 + rng.next_below(4)) : 9.0;  // SF for normal
        rec.values[4] = double(rng.next_below(10000));
        rec.values[5] = double(rng.next_below(10000));
        rec.values[22] = double(rng.next_below(100));
        rec.label = anomaly ? 1 : 0;
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

AlgorithmOptions default_options() {
    AlgorithmOptions o;
    o.seed = kSeed;
    return o;
}

// ---------------------------------------------------------------------------
// criteria 1-5, 7b, 8b: golden numbers on the real training file
// ---------------------------------------------------------------------------

void run_dataset_criteria(Suite& suite, const std::string& path) {
    std::cout << "dataset: " << path << '\n';
    const auto t_load = std::chrono::steady_clock::now();
    Dataset ds = load_csv(path, nsl_kdd_schema(LabelMode::Binary), LabelMode::Binary);
    std::cout << "loaded " << ds.size() << " records in " << pct(0).substr(0, 0)
              << format_double(elapsed(t_load)) << " s\n";
    suite.check("1a.record-count", ds.size() == 125973,
                "training file has " + std::to_string(ds.size()) + " records (expect 125973)");

    // ---- criterion 1: naive Bayes ------------------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto learner = make_learner("nb", default_options());
        std::vector<Prediction> predictions;
        EvalReport r = cross_validate(*learner, ds, 10, kSeed, &predictions);
        const double secs = elapsed(t0);
        suite.check("1b.nb-accuracy", r.accuracy >= 0.8888 && r.accuracy <= 0.9188,
                    "10-fold accuracy " + pct(r.accuracy) + " (target 90.38% +/- 1.5), " +
                        format_double(secs) + " s (budget 120 s, not asserted)");
        suite.check("1c.nb-rmse", r.rmse >= 0.2658 && r.rmse <= 0.3458,
                    "rmse " + format_double(r.rmse) + " (target 0.3058 +/- 0.04)");

        // criterion 7b needs the NB scores
        std::vector<std::pair<double, bool>> scored;
        const int anomaly = ds.schema.class_index("anomaly");
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            scored.push_back({predictions[i].dist[anomaly], predictions[i].actual == anomaly});
        }
        RocCurve nb_roc = roc_points(scored);
        write_file_atomic("roc_nb.csv", roc_csv(nb_roc));

        // ---- criterion 3: random tree and forest ---------------------
        const auto t1 = std::chrono::steady_clock::now();
        auto rtree = make_learner("rtree", default_options());
        std::vector<Prediction> rt_pred;
        EvalReport rt = cross_validate(*rtree, ds, 10, kSeed, &rt_pred);
        suite.check("3a.rtree-accuracy", rt.accuracy >= 0.993,
                    "10-fold accuracy " + pct(rt.accuracy) + " (target >= 99.3%), " +
                        format_double(elapsed(t1)) + " s");

        const auto t2 = std::chrono::steady_clock::now();
        auto rforest = make_learner("rforest", default_options());
        std::vector<Prediction> rf_pred;
        EvalReport rf = cross_validate(*rforest, ds, 10, kSeed, &rf_pred);
        suite.check("3b.rforest-accuracy", rf.accuracy >= 0.997,
                    "10-fold accuracy " + pct(rf.accuracy) + " (target >= 99.7%), " +
                        format_double(elapsed(t2)) + " s (budget 1800 s, not asserted)");
        suite.check("3c.rforest-beats-rtree", rf.accuracy >= rt.accuracy,
                    "forest " + pct(rf.accuracy) + " vs tree " + pct(rt.accuracy) +
                        " on identical folds");

        std::vector<std::pair<double, bool>> rt_scored, rf_scored;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            rt_scored.push_back({rt_pred[i].dist[anomaly], rt_pred[i].actual == anomaly});
            rf_scored.push_back({rf_pred[i].dist[anomaly], rf_pred[i].actual == anomaly});
        }
        RocCurve rt_roc = roc_points(rt_scored);
        RocCurve rf_roc = roc_points(rf_scored);
        write_file_atomic("roc_rtree.csv", roc_csv(rt_roc));
        write_file_atomic("roc_rforest.csv", roc_csv(rf_roc));
        suite.check("7b.roc-ordering",
                    rt_roc.auc >= nb_roc.auc && rf_roc.auc >= nb_roc.auc,
                    "AUC nb " + format_double(nb_roc.auc) + ", rtree " +
                        format_double(rt_roc.auc) + ", rforest " + format_double(rf_roc.auc) +
                        " (curves in roc_*.csv)");
    }

    // ---- criterion 2: discretized naive Bayes, best of three ----------
    {
        const auto t0 = std::chrono::steady_clock::now();
        double best = -1.0;
        std::string best_method;
        for (DiscretizeMethod method : {DiscretizeMethod::EqualWidth,
                                        DiscretizeMethod::EqualFrequency,
                                        DiscretizeMethod::EntropyMdl}) {
            AlgorithmOptions options = default_options();
            options.disc_method = method;
            EvalReport r = cross_validate(*make_learner("nb-disc", options), ds, 10, kSeed);
            std::cout << "      nb-disc " << discretize_method_name(method) << ": "
                      << pct(r.accuracy) << '\n';
            if (r.accuracy > best) {
                best = r.accuracy;
                best_method = discretize_method_name(method);
            }
        }
        suite.check("2.nb-disc-accuracy", best >= 0.9563 && best <= 0.9863,
                    "best method " + best_method + " at " + pct(best) +
                        " (target 97.13% +/- 1.5), " + format_double(elapsed(t0)) + " s");
    }

    // ---- criterion 4: wrapper and filter selection --------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        WrapperOptions wrapper;
        wrapper.folds = 5;
        wrapper.seed = kSeed;
        wrapper.max_features = 5;
        auto evaluator = make_learner("nb", default_options());
        FeatureSubset subset = wrapper_search(ds, *evaluator, wrapper);
        const double final_score =
            cross_validate(*evaluator, project(ds, subset.indices), 10, kSeed).accuracy;
        std::string names;
        for (std::size_t f : subset.indices) names += " " + std::to_string(f);
        suite.check("4a.wrapper-nb",
                    subset.indices.size() <= 5 && final_score >= 0.95,
                    "subset{" + names + " } 10-fold accuracy " + pct(final_score) +
                        " (target >= 95% with <= 5 features), " + format_double(elapsed(t0)) +
                        " s");

        const auto t1 = std::chrono::steady_clock::now();
        EvalReport filter = cross_validate(*make_filter_nb_learner(20), ds, 10, kSeed);
        suite.check("4b.filter-nb", filter.accuracy >= 0.90,
                    "top-20 info-gain features, 10-fold accuracy " + pct(filter.accuracy) +
                        " (target >= 90%), " + format_double(elapsed(t1)) + " s");
    }

    // ---- criterion 5: combined detector -------------------------------
    {
        AlgorithmOptions options = default_options();
        options.fusion = FusionRule::MajorityVote;
        CombinedConfig cfg;
        cfg.fusion = options.fusion;
        cfg.seed = kSeed;

        const auto t0 = std::chrono::steady_clock::now();
        CombinedModel model = train_combined(ds, cfg);
        const double build = elapsed(t0);
        EvalReport full = evaluate_combined(model, ds);
        suite.check("5a.combined-resub-full",
                    full.accuracy >= 0.999 && full.rmse <= 0.02,
                    "resubstitution accuracy " + pct(full.accuracy) + ", rmse " +
                        format_double(full.rmse) +
                        " (targets >= 99.9%, <= 0.02); build " + format_double(build) + " s");

        Dataset sample = sample_fraction(ds, 0.2, kSeed, true);
        CombinedModel small = train_combined(sample, cfg);
        EvalReport small_report = evaluate_combined(small, sample);
        suite.check("5b.combined-resub-20pct", small_report.accuracy >= 0.995,
                    "20% sample (" + std::to_string(sample.size()) +
                        " records) resubstitution accuracy " + pct(small_report.accuracy) +
                        " (target >= 99.5%)");

        const auto t1 = std::chrono::steady_clock::now();
        EvalReport cv = cross_validate(*make_learner("combined", options), ds, 10, kSeed);
        suite.check("5c.combined-cv", cv.accuracy >= 0.995,
                    "10-fold accuracy " + pct(cv.accuracy) + " (target >= 99.5%), " +
                        format_double(elapsed(t1)) + " s");

        // union-rule dominance documented by criterion 9 runs below; here
        // report the union numbers for comparison
        CombinedConfig union_cfg = cfg;
        union_cfg.fusion = FusionRule::AnomalyUnion;
        CombinedModel union_model = train_combined(ds, union_cfg);
        EvalReport union_report = evaluate_combined(union_model, ds);
        std::cout << "      (anomaly-union resubstitution for comparison: "
                  << pct(union_report.accuracy) << ")\n";
    }

    // ---- criterion 8b: determinism on the real data -------------------
    {
        auto learner = make_learner("nb", default_options());
        auto m1 = learner->train_model(ds);
        auto m2 = learner->train_model(ds);
        std::ostringstream p1, p2;
        m1->save_payload(p1);
        m2->save_payload(p2);
        EvalReport r1 = cross_validate(*learner, ds, 10, kSeed);
        EvalReport r2 = cross_validate(*learner, ds, 10, kSeed);
        suite.check("8b.real-data-determinism",
                    p1.str() == p2.str() &&
                        report_csv_row("nb", r1) == report_csv_row("nb", r2),
                    "repeated training and CV are byte-identical");
    }
}

// ---------------------------------------------------------------------------
// criterion 6: inference oracles
// ---------------------------------------------------------------------------

ClassDistribution brute_force_marginal(const BayesNetModel& m, const std::vector<int>& evidence,
                                       std::size_t class_node) {
    const std::size_t n = m.structure.node_count;
    ClassDistribution marginal(m.cardinalities[class_node]);
    std::vector<int> assignment(n, 0);
    for (;;) {
        bool consistent = true;
        for (std::size_t v = 0; v < n; ++v) {
            if (evidence[v] >= 0 && assignment[v] != evidence[v]) {
                consistent = false;
                break;
            }
        }
        if (consistent) {
            double p = 1.0;
            for (std::size_t v = 0; v < n; ++v) {
                p *= m.cpts[v][m.parent_config(v, assignment) * m.cardinalities[v] +
                               assignment[v]];
            }
            marginal[assignment[class_node]] += p;
        }
        std::size_t d = 0;
        while (d < n && ++assignment[d] == int(m.cardinalities[d])) assignment[d++] = 0;
        if (d == n) break;
    }
    marginal.normalize();
    return marginal;
}

BayesNetModel random_binary_network(Rng& rng, std::size_t nodes) {
    std::vector<std::size_t> ordering(nodes);
    std::iota(ordering.begin(), ordering.end(), 0u);
    rng.shuffle(ordering);
    BayesNetModel m;
    m.structure.node_count = nodes;
    m.structure.ordering = ordering;
    m.structure.parents.resize(nodes);
    for (std::size_t pos = 1; pos < nodes; ++pos) {
        for (std::size_t prev = 0; prev < pos; ++prev) {
            if (m.structure.parents[ordering[pos]].size() >= 3) break;
            if (rng.next_below(10) < 4) {
                m.structure.parents[ordering[pos]].push_back(ordering[prev]);
            }
        }
        std::sort(m.structure.parents[ordering[pos]].begin(),
                  m.structure.parents[ordering[pos]].end());
    }
    m.cardinalities.assign(nodes, 2);
    m.cpts.resize(nodes);
    for (std::size_t v = 0; v < nodes; ++v) {
        const std::size_t configs = std::size_t(1) << m.structure.parents[v].size();
        m.cpts[v].resize(configs * 2);
        for (std::size_t j = 0; j < configs; ++j) {
            const double a = 0.05 + 0.9 * rng.next_double();
            m.cpts[v][j * 2] = a;
            m.cpts[v][j * 2 + 1] = 1.0 - a;
        }
    }
    return m;
}

void run_inference_oracle(Suite& suite) {
    Rng rng(kSeed);
    double max_error = 0.0;
    std::size_t comparisons = 0;
    bool rip_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t nodes = 2 + rng.next_below(5);  // 2..6
        BayesNetModel m = random_binary_network(rng, nodes);
        JunctionTree jt = build_junction_tree(m.structure);
        rip_ok = rip_ok && verify_running_intersection(jt, nodes);
        const std::size_t class_node = rng.next_below(nodes);
        std::size_t patterns = 1;
        for (std::size_t v = 0; v + 1 < nodes; ++v) patterns *= 3;
        for (std::size_t code = 0; code < patterns; ++code) {
            std::vector<int> evidence(nodes, -1);
            std::size_t rest = code;
            for (std::size_t v = 0; v < nodes; ++v) {
                if (v == class_node) continue;
                evidence[v] = int(rest % 3) - 1;
                rest /= 3;
            }
            ClassDistribution expect = brute_force_marginal(m, evidence, class_node);
            ClassDistribution got = query_class_marginal(m, jt, evidence, class_node);
            for (std::size_t c = 0; c < 2; ++c) {
                max_error = std::max(max_error, std::abs(got[c] - expect[c]));
            }
            ++comparisons;
        }
    }
    suite.check("6a.junction-tree-oracle", max_error <= 1e-9 && rip_ok,
                "200 random networks, " + std::to_string(comparisons) +
                    " evidence patterns, max abs error " + format_double(max_error));

    // naive-structure reduction against the naive bayes module
    Dataset raw = synthetic_kdd(500, 7);
    Discretizer disc =
        fit_discretizer(raw, numeric_feature_indices(raw.schema), DiscretizeMethod::EqualWidth, 8);
    Dataset discrete = apply_discretizer(disc, raw);
    const std::size_t features = discrete.schema.feature_count();
    NetworkStructure naive;
    naive.node_count = features + 1;
    naive.ordering = class_first_ordering(features);
    naive.parents.resize(features + 1);
    for (std::size_t f = 0; f < features; ++f) naive.parents[f] = {features};
    BayesNetModel bn = fit_cpts(discrete, naive, 1.0);
    JunctionTree jt = build_junction_tree(naive);
    NBModel nb = train_nb(discrete, 1.0);

    Rng record_rng(11);
    double max_diff = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Record rec;
        for (std::size_t f = 0; f < features; ++f) {
            rec.values.push_back(
                double(record_rng.next_below(discrete.schema.feature(f).values.size())));
        }
        ClassDistribution a = predict_bn(bn, jt, rec);
        ClassDistribution b = predict_nb(nb, rec);
        for (std::size_t c = 0; c < a.size(); ++c) {
            max_diff = std::max(max_diff, std::abs(a[c] - b[c]));
        }
    }
    suite.check("6b.bn-reduces-to-nb", max_diff <= 1e-9,
                "naive structure vs naive bayes on 1000 random records, max abs diff " +
                    format_double(max_diff));
}

// ---------------------------------------------------------------------------
// criterion 7a: AUC oracle
// ---------------------------------------------------------------------------

double pair_counting_auc(const std::vector<std::pair<double, bool>>& scored) {
    double wins = 0;
    std::uint64_t pairs = 0;
    for (const auto& [ps, pp] : scored) {
        if (!pp) continue;
        for (const auto& [ns, np] : scored) {
            if (np) continue;
            ++pairs;
            if (ps > ns) wins += 1.0;
            else if (ps == ns) wins += 0.5;
        }
    }
    return wins / double(pairs);
}

void run_auc_oracle(Suite& suite) {
    Rng rng(kSeed + 1);
    double max_error = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::pair<double, bool>> scored;
        const std::size_t n = 2 + rng.next_below(19);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double score = double(rng.next_below(10)) / 10.0;
            const bool positive = rng.next_below(2) == 1;
            scored.push_back({score, positive});
            (positive ? has_pos : has_neg) = true;
        }
        if (!has_pos) scored.push_back({0.4, true});
        if (!has_neg) scored.push_back({0.6, false});
        max_error = std::max(
            max_error, std::abs(roc_points(scored).auc - pair_counting_auc(scored)));
    }
    suite.check("7a.auc-oracle", max_error <= 1e-12,
                "500 random score sets, sweep vs pair-counting, max abs error " +
                    format_double(max_error));
}

// ---------------------------------------------------------------------------
// criterion 8a: determinism and round-trips on synthetic data
// ---------------------------------------------------------------------------

void run_determinism(Suite& suite) {
    Dataset ds = synthetic_kdd(400, 3);
    bool models_identical = true, roundtrip_exact = true, reports_identical = true;
    AlgorithmOptions options = default_options();
    options.forest.tree_count = 20;

    const std::string dir =
        (std::filesystem::temp_directory_path() / "nids_acceptance").string();
    std::filesystem::create_directories(dir);
    for (const auto& algo : known_algorithms()) {
        auto learner = make_learner(algo, options);
        auto m1 = learner->train_model(ds);
        auto m2 = learner->train_model(ds);
        std::ostringstream p1, p2;
        m1->save_payload(p1);
        m2->save_payload(p2);
        models_identical = models_identical && p1.str() == p2.str();

        const std::string path = dir + "/" + algo + ".model";
        save_model(path, *m1, ds.schema, kSeed, {});
        LoadedModel loaded = load_model(path);
        for (const auto& rec : ds.records) {
            if (m1->predict(rec).probabilities != loaded.classifier->predict(rec).probabilities) {
                roundtrip_exact = false;
                break;
            }
        }

        EvalReport r1 = cross_validate(*learner, ds, 5, kSeed);
        EvalReport r2 = cross_validate(*learner, ds, 5, kSeed);
        reports_identical =
            reports_identical && report_csv_row(algo, r1) == report_csv_row(algo, r2);
    }
    std::filesystem::remove_all(dir);
    suite.check("8a.determinism", models_identical && reports_identical,
                "all six algorithms: repeated train and CV byte-identical");
    suite.check("8c.model-round-trip", roundtrip_exact,
                "save/load preserves every prediction exactly");
}

// ---------------------------------------------------------------------------
// criterion 9: module property suites
// ---------------------------------------------------------------------------

void run_properties(Suite& suite) {
    Rng rng(kSeed + 2);

    // stratification bounds
    bool strat_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        Dataset ds = synthetic_kdd(40 + rng.next_below(200), rng.next_u64());
        const int k = 2 + int(rng.next_below(9));
        FoldPlan plan = stratified_folds(ds, k, rng.next_u64());
        std::map<std::pair<int, int>, int> counts;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            counts[{ds.records[i].label, plan.assignments[i]}]++;
        }
        for (int cls = 0; cls < 2; ++cls) {
            int lo = 1 << 30, hi = 0;
            for (int f = 0; f < k; ++f) {
                lo = std::min(lo, counts[{cls, f}]);
                hi = std::max(hi, counts[{cls, f}]);
            }
            strat_ok = strat_ok && hi - lo <= 1;
        }
    }
    suite.check("9a.stratification", strat_ok, "per-class fold sizes differ by <= 1");

    // probability normalization across all predictors
    {
        Dataset ds = synthetic_kdd(300, 9);
        bool normalized = true;
        AlgorithmOptions options = default_options();
        options.forest.tree_count = 10;
        for (const auto& algo : known_algorithms()) {
            auto model = make_learner(algo, options)->train_model(ds);
            for (const auto& rec : ds.records) {
                ClassDistribution d = model->predict(rec);
                double sum = 0;
                for (double p : d.probabilities) {
                    normalized = normalized && p >= 0.0 && p <= 1.0;
                    sum += p;
                }
                normalized = normalized && std::abs(sum - 1.0) <= 1e-9;
            }
        }
        suite.check("9b.normalization", normalized,
                    "every predictor emits distributions summing to 1");
    }

    // split gain positivity
    {
        Dataset ds = synthetic_kdd(200, 15);
        bool positive = true;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::uint32_t> subset;
            for (std::uint32_t i = 0; i < ds.size(); ++i) {
                if (rng.next_below(2)) subset.push_back(i);
            }
            if (subset.size() < 2) continue;
            auto split = best_split(ds, subset, {0, 1, 2, 3, 4, 5});
            if (split) positive = positive && split->gain > 0.0;
        }
        suite.check("9c.split-gain", positive, "every returned split has strictly positive gain");
    }

    // K2 monotonicity (enforced internally, throws on violation)
    {
        bool monotone = true;
        try {
            for (int trial = 0; trial < 10; ++trial) {
                Dataset raw = synthetic_kdd(150, rng.next_u64());
                Discretizer disc = fit_discretizer(raw, numeric_feature_indices(raw.schema),
                                                   DiscretizeMethod::EqualWidth, 5);
                Dataset discrete = apply_discretizer(disc, raw);
                k2_search(discrete, class_first_ordering(discrete.schema.feature_count()), 2,
                          1.0);
            }
        } catch (const std::logic_error&) {
            monotone = false;
        }
        suite.check("9d.k2-monotone", monotone,
                    "greedy score trajectory never decreases (10 searches)");
    }

    // union dominance on an imperfect model
    {
        Dataset ds = synthetic_kdd(300, 21);
        Rng noise(5);
        for (auto& rec : ds.records) {
            if (noise.next_below(10) == 0) rec.label = 1 - rec.label;  // force disagreements
        }
        CombinedConfig cfg;
        cfg.fusion = FusionRule::AnomalyUnion;
        cfg.seed = kSeed;
        cfg.forest.tree_count = 10;
        CombinedModel model = train_combined(ds, cfg);
        const int anomaly = model.anomaly_index;
        std::uint64_t fused_det = 0, fused_fp = 0;
        std::array<std::uint64_t, 3> member_det{}, member_fp{};
        for (const auto& rec : ds.records) {
            CombinedPrediction p = predict_combined(model, rec);
            for (std::size_t m = 0; m < 3; ++m) {
                const bool flags = p.member[m].argmax() == anomaly;
                if (flags && rec.label == anomaly) member_det[m]++;
                if (flags && rec.label != anomaly) member_fp[m]++;
            }
            if (p.label == anomaly && rec.label == anomaly) fused_det++;
            if (p.label == anomaly && rec.label != anomaly) fused_fp++;
        }
        bool dominance = true;
        for (std::size_t m = 0; m < 3; ++m) {
            dominance = dominance && fused_det >= member_det[m] && fused_fp >= member_fp[m];
        }
        suite.check("9e.union-dominance", dominance,
                    "union detections " + std::to_string(fused_det) +
                        " and false alarms " + std::to_string(fused_fp) +
                        " dominate every member");
    }

    // running intersection on random learned structures
    {
        bool rip = true;
        for (int trial = 0; trial < 100; ++trial) {
            BayesNetModel m = random_binary_network(rng, 2 + rng.next_below(5));
            rip = rip && verify_running_intersection(build_junction_tree(m.structure),
                                                     m.structure.node_count);
        }
        suite.check("9f.running-intersection", rip, "verified on 100 random structures");
    }

    // discretizer monotonicity and CPT normalization
    {
        Dataset ds = synthetic_kdd(250, 33);
        bool mono = true;
        for (DiscretizeMethod method : {DiscretizeMethod::EqualWidth,
                                        DiscretizeMethod::EqualFrequency,
                                        DiscretizeMethod::EntropyMdl}) {
            Discretizer disc =
                fit_discretizer(ds, numeric_feature_indices(ds.schema), method, 7);
            for (const auto& fc : disc.feature_cuts()) {
                for (int i = 0; i < 200; ++i) {
                    double a = rng.next_double() * 12000.0 - 1000.0;
                    double b = rng.next_double() * 12000.0 - 1000.0;
                    if (a > b) std::swap(a, b);
                    mono = mono &&
                           Discretizer::bin_of(a, fc.cuts) <= Discretizer::bin_of(b, fc.cuts);
                }
            }
        }
        Discretizer disc = fit_discretizer(ds, numeric_feature_indices(ds.schema),
                                           DiscretizeMethod::EqualWidth, 6);
        Dataset discrete = apply_discretizer(disc, ds);
        NetworkStructure s = k2_search(
            discrete, class_first_ordering(discrete.schema.feature_count()), 2, 1.0);
        BayesNetModel bn = fit_cpts(discrete, s, 1.0);
        bool cpt_ok = true;
        for (std::size_t v = 0; v < bn.structure.node_count; ++v) {
            const std::size_t card = bn.cardinalities[v];
            for (std::size_t j = 0; j < bn.cpts[v].size() / card; ++j) {
                double sum = 0;
                for (std::size_t k = 0; k < card; ++k) sum += bn.cpts[v][j * card + k];
                cpt_ok = cpt_ok && std::abs(sum - 1.0) <= 1e-9;
            }
        }
        suite.check("9g.discretize-and-cpt", mono && cpt_ok,
                    "bin monotonicity and CPT normalization hold");
    }
}

}  // namespace

int main(int argc, char** argv) {
    Suite suite;
    const auto t0 = std::chrono::steady_clock::now();
    std::cout << "== acceptance suite ==\n";

    run_inference_oracle(suite);
    run_auc_oracle(suite);
    run_determinism(suite);
    run_properties(suite);

    if (auto data = locate_dataset(argc, argv)) {
        try {
            run_dataset_criteria(suite, *data);
        } catch (const std::exception& e) {
            suite.check("1-5.dataset-criteria", false,
                        std::string("aborted with error: ") + e.what());
        }
    } else {
        std::cout << "NOTE: KDDTrain+.txt not found (looked at --data, $NIDS_DATA, "
                     "./data, ../data).\n"
                     "      Fetch it with `nids fetch-dataset` to run the golden-number "
                     "criteria.\n";
        suite.skip("1a.record-count", "dataset not present");
        suite.skip("1b.nb-accuracy", "dataset not present");
        suite.skip("1c.nb-rmse", "dataset not present");
        suite.skip("2.nb-disc-accuracy", "dataset not present");
        suite.skip("3a.rtree-accuracy", "dataset not present");
        suite.skip("3b.rforest-accuracy", "dataset not present");
        suite.skip("3c.rforest-beats-rtree", "dataset not present");
        suite.skip("4a.wrapper-nb", "dataset not present");
        suite.skip("4b.filter-nb", "dataset not present");
        suite.skip("5a.combined-resub-full", "dataset not present");
        suite.skip("5b.combined-resub-20pct", "dataset not present");
        suite.skip("5c.combined-cv", "dataset not present");
        suite.skip("7b.roc-ordering", "dataset not present");
        suite.skip("8b.real-data-determinism", "dataset not present");
    }

    std::cout << "== " << suite.passed << " passed, " << suite.failed << " failed, "
              << suite.skipped << " skipped in " << format_double(elapsed(t0)) << " s ==\n";
    return suite.failed == 0 ? 0 : 1;
}
