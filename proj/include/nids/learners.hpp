#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nids/discretize.hpp"
#include "nids/ensemble.hpp"
#include "nids/eval.hpp"
#include "nids/naive_bayes.hpp"
#include "nids/trees.hpp"

namespace nids {

/// A classifier whose parameters can be written into a model file.
class TrainedModel : public Classifier {
public:
    virtual std::string algorithm() const = 0;
    virtual void save_payload(std::ostream& out) const = 0;
    /// Distribution used for threshold sweeps (ROC). Defaults to the
    /// prediction itself; the combined detector overrides it with the
    /// mean member distribution, since its vote-rule labels are one-hot.
    virtual ClassDistribution score(const Record& record) const { return predict(record); }
};

/// Learner whose result is persistable.
class ModelLearner : public Learner {
public:
    std::unique_ptr<Classifier> train(const Dataset& ds) const final {
        return train_model(ds);
    }
    virtual std::unique_ptr<TrainedModel> train_model(const Dataset& ds) const = 0;
};

/// Knobs shared by the six algorithms; each learner reads the ones it
/// understands.
struct AlgorithmOptions {
    double alpha = 1.0;     // Laplace / Dirichlet smoothing
    double sd_floor = 1e-3;
    DiscretizeMethod disc_method = DiscretizeMethod::EqualWidth;
    int bins = 10;
    std::size_t max_parents = 3;  // class parent plus up to two features
    TreeConfig tree;
    ForestConfig forest;
    FusionRule fusion = FusionRule::AnomalyUnion;
    std::uint64_t seed = 0;
};

/// algo is one of: nb, nb-disc, k2bn, rtree, rforest, combined.
std::unique_ptr<ModelLearner> make_learner(const std::string& algo,
                                           const AlgorithmOptions& options);

const std::vector<std::string>& known_algorithms();

/// Filter-method learner: ranks by information gain on the training fold,
/// keeps the top_n features and trains naive Bayes on the projection.
std::unique_ptr<ModelLearner> make_filter_nb_learner(std::size_t top_n, double alpha = 1.0);

/// Reconstructs a trained model from its payload section (used by the
/// model-file loader).
std::unique_ptr<TrainedModel> read_model_payload(const std::string& algorithm,
                                                 std::istream& in);

}  // namespace nids
