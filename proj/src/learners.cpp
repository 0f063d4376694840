#include "nids/learners.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "nids/bayes_net.hpp"
#include "nids/errors.hpp"
#include "nids/featsel.hpp"
#include "nids/junction_tree.hpp"
#include "nids/textio.hpp"

namespace nids {

namespace {

// ---- token-stream serialization helpers --------------------------------

void put(std::ostream& out, const std::string& token) { out << token << '\n'; }
void put(std::ostream& out, double value) { out << format_double(value) << '\n'; }
void put(std::ostream& out, std::uint64_t value) { out << value << '\n'; }

std::string next_token(std::istream& in) {
    std::string token;
    if (!(in >> token)) throw ModelError("model payload truncated");
    return token;
}

double next_double(std::istream& in) {
    double v;
    if (!parse_double(next_token(in), v)) throw ModelError("malformed number in model file");
    return v;
}

std::uint64_t next_u64(std::istream& in) {
    const std::string token = next_token(in);
    try {
        return std::stoull(token);
    } catch (...) {
        throw ModelError("malformed integer in model file");
    }
}

std::size_t next_size(std::istream& in) { return static_cast<std::size_t>(next_u64(in)); }

void expect(std::istream& in, const std::string& token) {
    const std::string got = next_token(in);
    if (got != token) {
        throw ModelError("model file: expected '" + token + "', got '" + got + "'");
    }
}

// ---- component writers / readers ----------------------------------------

void write_nb(std::ostream& out, const NBModel& m) {
    put(out, std::string("nb"));
    put(out, std::uint64_t(m.class_count));
    put(out, std::uint64_t(m.feature_count));
    put(out, m.smoothing);
    put(out, m.sd_floor);
    put(out, std::uint64_t(m.schema_fingerprint));
    for (double p : m.class_priors) put(out, p);
    for (std::size_t f = 0; f < m.feature_count; ++f) {
        if (m.nominal_cardinality[f] > 0) {
            put(out, std::string("nominal"));
            put(out, std::uint64_t(m.nominal_cardinality[f]));
            for (double p : m.nominal_tables[f]) put(out, p);
        } else {
            put(out, std::string("numeric"));
            for (const auto& g : m.numeric_params[f]) {
                put(out, g.mean);
                put(out, g.sd);
            }
        }
    }
}

NBModel read_nb(std::istream& in) {
    expect(in, "nb");
    NBModel m;
    m.class_count = next_size(in);
    m.feature_count = next_size(in);
    m.smoothing = next_double(in);
    m.sd_floor = next_double(in);
    m.schema_fingerprint = next_u64(in);
    m.class_priors.resize(m.class_count);
    for (auto& p : m.class_priors) p = next_double(in);
    m.nominal_tables.resize(m.feature_count);
    m.nominal_cardinality.assign(m.feature_count, 0);
    m.numeric_params.resize(m.feature_count);
    for (std::size_t f = 0; f < m.feature_count; ++f) {
        const std::string kind = next_token(in);
        if (kind == "nominal") {
            const std::size_t card = next_size(in);
            m.nominal_cardinality[f] = card;
            m.nominal_tables[f].resize(m.class_count * card);
            for (auto& p : m.nominal_tables[f]) p = next_double(in);
        } else if (kind == "numeric") {
            m.numeric_params[f].resize(m.class_count);
            for (auto& g : m.numeric_params[f]) {
                g.mean = next_double(in);
                g.sd = next_double(in);
            }
        } else {
            throw ModelError("model file: unknown feature kind '" + kind + "'");
        }
    }
    return m;
}

void write_discretizer(std::ostream& out, const Discretizer& d) {
    put(out, std::string("discretizer"));
    put(out, std::string(discretize_method_name(d.method())));
    put(out, std::uint64_t(d.bin_count()));
    put(out, std::uint64_t(d.source_fingerprint()));
    put(out, std::uint64_t(d.feature_cuts().size()));
    for (const auto& fc : d.feature_cuts()) {
        put(out, std::uint64_t(fc.feature));
        put(out, std::uint64_t(fc.cuts.size()));
        for (double c : fc.cuts) put(out, c);
    }
}

Discretizer read_discretizer(std::istream& in) {
    expect(in, "discretizer");
    const DiscretizeMethod method = parse_discretize_method(next_token(in));
    const int bins = static_cast<int>(next_u64(in));
    const std::uint64_t fingerprint = next_u64(in);
    const std::size_t count = next_size(in);
    std::vector<Discretizer::FeatureCuts> cuts(count);
    for (auto& fc : cuts) {
        fc.feature = next_size(in);
        fc.cuts.resize(next_size(in));
        for (double& c : fc.cuts) c = next_double(in);
    }
    return Discretizer(std::move(cuts), method, bins, fingerprint);
}

void write_bayes_net(std::ostream& out, const BayesNetModel& m) {
    put(out, std::string("bayesnet"));
    put(out, std::uint64_t(m.structure.node_count));
    put(out, m.smoothing);
    for (std::size_t v : m.structure.ordering) put(out, std::uint64_t(v));
    for (std::size_t card : m.cardinalities) put(out, std::uint64_t(card));
    for (const auto& parents : m.structure.parents) {
        put(out, std::uint64_t(parents.size()));
        for (std::size_t p : parents) put(out, std::uint64_t(p));
    }
    for (const auto& cpt : m.cpts) {
        put(out, std::uint64_t(cpt.size()));
        for (double p : cpt) put(out, p);
    }
}

BayesNetModel read_bayes_net(std::istream& in) {
    expect(in, "bayesnet");
    BayesNetModel m;
    m.structure.node_count = next_size(in);
    m.smoothing = next_double(in);
    m.structure.ordering.resize(m.structure.node_count);
    for (auto& v : m.structure.ordering) v = next_size(in);
    m.cardinalities.resize(m.structure.node_count);
    for (auto& c : m.cardinalities) c = next_size(in);
    m.structure.parents.resize(m.structure.node_count);
    for (auto& parents : m.structure.parents) {
        parents.resize(next_size(in));
        for (auto& p : parents) p = next_size(in);
    }
    m.cpts.resize(m.structure.node_count);
    for (auto& cpt : m.cpts) {
        cpt.resize(next_size(in));
        for (double& p : cpt) p = next_double(in);
    }
    return m;
}

void write_tree(std::ostream& out, const TreeNode& node) {
    if (node.is_leaf()) {
        put(out, std::string("L"));
        put(out, std::uint64_t(node.class_counts.size()));
        for (auto c : node.class_counts) put(out, std::uint64_t(c));
        return;
    }
    if (!node.is_nominal) {
        put(out, std::string("N"));
        put(out, std::uint64_t(node.feature));
        put(out, node.threshold);
        write_tree(out, *node.children[0]);
        write_tree(out, *node.children[1]);
        return;
    }
    put(out, std::string("M"));
    put(out, std::uint64_t(node.feature));
    put(out, std::uint64_t(node.children.size()));
    put(out, std::uint64_t(node.majority_child));
    for (const auto& child : node.children) put(out, std::uint64_t(child ? 1 : 0));
    for (const auto& child : node.children) {
        if (child) write_tree(out, *child);
    }
}

std::unique_ptr<TreeNode> read_tree(std::istream& in) {
    auto node = std::make_unique<TreeNode>();
    const std::string kind = next_token(in);
    if (kind == "L") {
        node->class_counts.resize(next_size(in));
        for (auto& c : node->class_counts) c = next_u64(in);
        return node;
    }
    if (kind == "N") {
        node->feature = static_cast<int>(next_u64(in));
        node->threshold = next_double(in);
        node->children.resize(2);
        node->children[0] = read_tree(in);
        node->children[1] = read_tree(in);
        return node;
    }
    if (kind == "M") {
        node->feature = static_cast<int>(next_u64(in));
        node->is_nominal = true;
        node->children.resize(next_size(in));
        node->majority_child = static_cast<int>(next_u64(in));
        std::vector<bool> present(node->children.size());
        for (std::size_t i = 0; i < present.size(); ++i) present[i] = next_u64(in) != 0;
        for (std::size_t i = 0; i < present.size(); ++i) {
            if (present[i]) node->children[i] = read_tree(in);
        }
        return node;
    }
    throw ModelError("model file: unknown tree node kind '" + kind + "'");
}

void write_forest(std::ostream& out, const ForestModel& m) {
    put(out, std::string("forest"));
    put(out, std::uint64_t(m.trees.size()));
    put(out, m.config.bag_fraction);
    put(out, std::uint64_t(m.config.r_features));
    put(out, std::uint64_t(m.config.with_replacement ? 1 : 0));
    put(out, std::uint64_t(m.config.min_leaf));
    put(out, std::uint64_t(m.config.seed));
    put(out, std::uint64_t(m.class_labels.size()));
    for (const auto& label : m.class_labels) put(out, label);
    for (const auto& tree : m.trees) write_tree(out, *tree);
}

ForestModel read_forest(std::istream& in) {
    expect(in, "forest");
    ForestModel m;
    const std::size_t trees = next_size(in);
    m.config.tree_count = static_cast<int>(trees);
    m.config.bag_fraction = next_double(in);
    m.config.r_features = static_cast<int>(next_u64(in));
    m.config.with_replacement = next_u64(in) != 0;
    m.config.min_leaf = static_cast<int>(next_u64(in));
    m.config.seed = next_u64(in);
    m.class_labels.resize(next_size(in));
    for (auto& label : m.class_labels) label = next_token(in);
    m.trees.resize(trees);
    for (auto& tree : m.trees) tree = read_tree(in);
    return m;
}

// ---- trained model wrappers ----------------------------------------------

class TrainedNB : public TrainedModel {
public:
    explicit TrainedNB(NBModel model) : model_(std::move(model)) {}
    std::string algorithm() const override { return "nb"; }
    ClassDistribution predict(const Record& record) const override {
        return predict_nb(model_, record);
    }
    void save_payload(std::ostream& out) const override { write_nb(out, model_); }

private:
    NBModel model_;
};

class TrainedDiscNB : public TrainedModel {
public:
    TrainedDiscNB(Discretizer disc, NBModel model)
        : disc_(std::move(disc)), model_(std::move(model)) {}
    std::string algorithm() const override { return "nb-disc"; }
    ClassDistribution predict(const Record& record) const override {
        return predict_nb(model_, discretize_record(disc_, record));
    }
    void save_payload(std::ostream& out) const override {
        write_discretizer(out, disc_);
        write_nb(out, model_);
    }

private:
    Discretizer disc_;
    NBModel model_;
};

class TrainedK2BN : public TrainedModel {
public:
    TrainedK2BN(Discretizer disc, BayesNetModel bn)
        : disc_(std::move(disc)), bn_(std::move(bn)) {
        jtree_ = build_junction_tree(bn_.structure);
    }
    std::string algorithm() const override { return "k2bn"; }
    ClassDistribution predict(const Record& record) const override {
        return predict_bn(bn_, jtree_, discretize_record(disc_, record));
    }
    void save_payload(std::ostream& out) const override {
        write_discretizer(out, disc_);
        write_bayes_net(out, bn_);
    }

private:
    Discretizer disc_;
    BayesNetModel bn_;
    JunctionTree jtree_;
};

class TrainedRTree : public TrainedModel {
public:
    explicit TrainedRTree(std::unique_ptr<TreeNode> root) : root_(std::move(root)) {}
    std::string algorithm() const override { return "rtree"; }
    ClassDistribution predict(const Record& record) const override {
        return predict_tree(*root_, record);
    }
    void save_payload(std::ostream& out) const override { write_tree(out, *root_); }

private:
    std::unique_ptr<TreeNode> root_;
};

class TrainedRForest : public TrainedModel {
public:
    explicit TrainedRForest(ForestModel model) : model_(std::move(model)) {}
    std::string algorithm() const override { return "rforest"; }
    ClassDistribution predict(const Record& record) const override {
        return predict_forest(model_, record);
    }
    void save_payload(std::ostream& out) const override { write_forest(out, model_); }

private:
    ForestModel model_;
};

class TrainedCombined : public TrainedModel {
public:
    explicit TrainedCombined(CombinedModel model) : model_(std::move(model)) {}
    std::string algorithm() const override { return "combined"; }
    ClassDistribution predict(const Record& record) const override {
        return predict_combined(model_, record).fused;
    }
    ClassDistribution score(const Record& record) const override {
        const CombinedPrediction p = predict_combined(model_, record);
        ClassDistribution mean(model_.class_labels.size());
        for (const auto& dist : p.member) {
            for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += dist[c] / 3.0;
        }
        return mean;
    }
    void save_payload(std::ostream& out) const override {
        put(out, std::string("combined"));
        put(out, std::string(fusion_rule_name(model_.fusion)));
        put(out, std::uint64_t(model_.anomaly_index));
        put(out, std::uint64_t(model_.class_labels.size()));
        for (const auto& label : model_.class_labels) put(out, label);
        write_discretizer(out, model_.discretizer);
        write_bayes_net(out, model_.bn);
        write_tree(out, *model_.rtree);
        write_forest(out, model_.rforest);
    }
    const CombinedModel& combined() const { return model_; }

private:
    CombinedModel model_;
};

class TrainedFilterNB : public TrainedModel {
public:
    TrainedFilterNB(std::vector<std::size_t> subset, NBModel model)
        : subset_(std::move(subset)), model_(std::move(model)) {}
    std::string algorithm() const override { return "nb-filter"; }
    ClassDistribution predict(const Record& record) const override {
        Record projected;
        projected.label = record.label;
        projected.values.reserve(subset_.size());
        for (std::size_t f : subset_) projected.values.push_back(record.values[f]);
        return predict_nb(model_, projected);
    }
    void save_payload(std::ostream& out) const override {
        put(out, std::string("subset"));
        put(out, std::uint64_t(subset_.size()));
        for (std::size_t f : subset_) put(out, std::uint64_t(f));
        write_nb(out, model_);
    }

private:
    std::vector<std::size_t> subset_;
    NBModel model_;
};

// ---- learners -------------------------------------------------------------

class NBLearner : public ModelLearner {
public:
    explicit NBLearner(const AlgorithmOptions& options) : options_(options) {}
    std::string name() const override { return "nb"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        return std::make_unique<TrainedNB>(train_nb(ds, options_.alpha, options_.sd_floor));
    }

private:
    AlgorithmOptions options_;
};

class DiscNBLearner : public ModelLearner {
public:
    explicit DiscNBLearner(const AlgorithmOptions& options) : options_(options) {}
    std::string name() const override { return "nb-disc"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        Discretizer disc = fit_discretizer(ds, numeric_feature_indices(ds.schema),
                                           options_.disc_method, options_.bins);
        NBModel nb = train_nb(apply_discretizer(disc, ds), options_.alpha, options_.sd_floor);
        return std::make_unique<TrainedDiscNB>(std::move(disc), std::move(nb));
    }

private:
    AlgorithmOptions options_;
};

class K2BNLearner : public ModelLearner {
public:
    explicit K2BNLearner(const AlgorithmOptions& options) : options_(options) {}
    std::string name() const override { return "k2bn"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        Discretizer disc = fit_discretizer(ds, numeric_feature_indices(ds.schema),
                                           options_.disc_method, options_.bins);
        Dataset discrete = apply_discretizer(disc, ds);
        NetworkStructure structure =
            k2_search(discrete, class_first_ordering(discrete.schema.feature_count()),
                      options_.max_parents, options_.alpha);
        BayesNetModel bn = fit_cpts(discrete, structure, options_.alpha);
        return std::make_unique<TrainedK2BN>(std::move(disc), std::move(bn));
    }

private:
    AlgorithmOptions options_;
};

class RTreeLearner : public ModelLearner {
public:
    explicit RTreeLearner(const AlgorithmOptions& options) : options_(options) {}
    std::string name() const override { return "rtree"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        TreeConfig cfg = options_.tree;
        cfg.seed = options_.seed;
        return std::make_unique<TrainedRTree>(train_random_tree(ds, cfg));
    }

private:
    AlgorithmOptions options_;
};

class RForestLearner : public ModelLearner {
public:
    explicit RForestLearner(const AlgorithmOptions& options) : options_(options) {}
    std::string name() const override { return "rforest"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        ForestConfig cfg = options_.forest;
        cfg.seed = options_.seed;
        return std::make_unique<TrainedRForest>(train_random_forest(ds, cfg));
    }

private:
    AlgorithmOptions options_;
};

class CombinedLearner : public ModelLearner {
public:
    explicit CombinedLearner(const AlgorithmOptions& options) : options_(options) {}
    std::string name() const override { return "combined"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        CombinedConfig cfg;
        cfg.disc_method = options_.disc_method;
        cfg.bins = options_.bins;
        cfg.max_parents = options_.max_parents;
        cfg.alpha = options_.alpha;
        cfg.tree = options_.tree;
        cfg.forest = options_.forest;
        cfg.fusion = options_.fusion;
        cfg.seed = options_.seed;
        return std::make_unique<TrainedCombined>(train_combined(ds, cfg));
    }

private:
    AlgorithmOptions options_;
};

class FilterNBLearner : public ModelLearner {
public:
    FilterNBLearner(std::size_t top_n, double alpha) : top_n_(top_n), alpha_(alpha) {}
    std::string name() const override { return "nb-filter"; }
    std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const override {
        FeatureRanking ranking = info_gain_rank(ds);
        const std::size_t keep = std::min(top_n_, ranking.entries.size());
        if (keep == 0) throw UsageError("top_n must be positive");
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < keep; ++i) subset.push_back(ranking.entries[i].first);
        std::sort(subset.begin(), subset.end());
        NBModel nb = train_nb(project(ds, subset), alpha_);
        return std::make_unique<TrainedFilterNB>(std::move(subset), std::move(nb));
    }

private:
    std::size_t top_n_;
    double alpha_;
};

}  // namespace

std::unique_ptr<ModelLearner> make_learner(const std::string& algo,
                                           const AlgorithmOptions& options) {
    if (algo == "nb") return std::make_unique<NBLearner>(options);
    if (algo == "nb-disc") return std::make_unique<DiscNBLearner>(options);
    if (algo == "k2bn") return std::make_unique<K2BNLearner>(options);
    if (algo == "rtree") return std::make_unique<RTreeLearner>(options);
    if (algo == "rforest") return std::make_unique<RForestLearner>(options);
    if (algo == "combined") return std::make_unique<CombinedLearner>(options);
    throw UsageError("unknown algorithm '" + algo + "'");
}

const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> algorithms = {"nb",    "nb-disc", "k2bn",
                                                        "rtree", "rforest", "combined"};
    return algorithms;
}

std::unique_ptr<ModelLearner> make_filter_nb_learner(std::size_t top_n, double alpha) {
    return std::make_unique<FilterNBLearner>(top_n, alpha);
}

std::unique_ptr<TrainedModel> read_model_payload(const std::string& algorithm,
                                                 std::istream& in) {
    if (algorithm == "nb") return std::make_unique<TrainedNB>(read_nb(in));
    if (algorithm == "nb-disc") {
        Discretizer disc = read_discretizer(in);
        return std::make_unique<TrainedDiscNB>(std::move(disc), read_nb(in));
    }
    if (algorithm == "k2bn") {
        Discretizer disc = read_discretizer(in);
        return std::make_unique<TrainedK2BN>(std::move(disc), read_bayes_net(in));
    }
    if (algorithm == "rtree") return std::make_unique<TrainedRTree>(read_tree(in));
    if (algorithm == "rforest") return std::make_unique<TrainedRForest>(read_forest(in));
    if (algorithm == "combined") {
        expect(in, "combined");
        CombinedModel m;
        m.fusion = parse_fusion_rule(next_token(in));
        m.anomaly_index = static_cast<int>(next_u64(in));
        m.class_labels.resize(next_size(in));
        for (auto& label : m.class_labels) label = next_token(in);
        m.discretizer = read_discretizer(in);
        m.bn = read_bayes_net(in);
        m.jtree = build_junction_tree(m.bn.structure);
        m.rtree = read_tree(in);
        m.rforest = read_forest(in);
        return std::make_unique<TrainedCombined>(std::move(m));
    }
    if (algorithm == "nb-filter") {
        expect(in, "subset");
        std::vector<std::size_t> subset(next_size(in));
        for (auto& f : subset) f = next_size(in);
        return std::make_unique<TrainedFilterNB>(std::move(subset), read_nb(in));
    }
    throw ModelError("model file: unknown algorithm '" + algorithm + "'");
}

}  // namespace nids
