#pragma once

#include <cstdint>
#include <vector>

#include "nids/dataset.hpp"
#include "nids/eval.hpp"

namespace nids {

/// Features ordered by score, descending; ties by feature index.
struct FeatureRanking {
    std::vector<std::pair<std::size_t, double>> entries;
};

struct FeatureSubset {
    std::vector<std::size_t> indices;  // sorted
    double achieved_score = 0.0;       // cross-validated accuracy
};

/// Information-gain ranking: score(f) = H(class) - H(class | f).
/// Numeric features are binned internally (equal width, 10 bins) for the
/// entropy computation; the dataset itself is untouched.
FeatureRanking info_gain_rank(const Dataset& ds);

/// Dataset restricted to the chosen features (plus the label).
Dataset project(const Dataset& ds, const std::vector<std::size_t>& features);

enum class WrapperStrategy { GreedyForward, BestFirst };

struct WrapperOptions {
    int folds = 5;
    std::uint64_t seed = 0;
    WrapperStrategy strategy = WrapperStrategy::GreedyForward;
    std::size_t max_features = 0;  // 0 = unbounded
    int best_first_patience = 5;   // non-improving expansions before stopping
};

/// Forward subset search scored by the evaluator's k-fold CV accuracy on
/// the projected data. GreedyForward adds the best feature until no
/// addition improves; BestFirst explores the same move set with a bounded
/// non-improving budget. Deterministic per seed; ties prefer the lower
/// feature index.
FeatureSubset wrapper_search(const Dataset& ds, const Learner& evaluator,
                             const WrapperOptions& options);

}  // namespace nids
