#include "nids/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nids/discretize.hpp"
#include "nids/errors.hpp"
#include "nids/parallel.hpp"

namespace nids {

namespace {

double entropy(const std::vector<double>& counts, double total) {
    double h = 0.0;
    for (double c : counts) {
        if (c > 0) h -= (c / total) * std::log2(c / total);
    }
    return h;
}

}  // namespace

FeatureRanking info_gain_rank(const Dataset& ds) {
    if (ds.records.empty()) throw DataError("cannot rank features of an empty dataset");
    const std::size_t classes = ds.schema.class_count();
    const double n = static_cast<double>(ds.size());

    std::vector<double> class_counts(classes, 0.0);
    for (const auto& r : ds.records) class_counts[r.label] += 1.0;
    const double class_entropy = entropy(class_counts, n);

    FeatureRanking ranking;
    for (std::size_t f = 0; f < ds.schema.feature_count(); ++f) {
        const FeatureInfo& info = ds.schema.feature(f);
        std::vector<int> bins(ds.size());
        std::size_t bin_count;
        if (info.kind == FeatureKind::Nominal) {
            bin_count = info.values.size();
            for (std::size_t r = 0; r < ds.size(); ++r) {
                bins[r] = static_cast<int>(ds.records[r].values[f]);
            }
        } else {
            // internal equal-width pass, 10 bins over the observed range
            double lo = ds.records[0].values[f], hi = lo;
            for (const auto& r : ds.records) {
                lo = std::min(lo, r.values[f]);
                hi = std::max(hi, r.values[f]);
            }
            bin_count = 10;
            const double width = (hi - lo) / 10.0;
            for (std::size_t r = 0; r < ds.size(); ++r) {
                int b = width > 0
                            ? std::min(9, static_cast<int>((ds.records[r].values[f] - lo) / width))
                            : 0;
                bins[r] = b;
            }
        }
        std::vector<double> joint(bin_count * classes, 0.0);
        std::vector<double> bin_totals(bin_count, 0.0);
        for (std::size_t r = 0; r < ds.size(); ++r) {
            joint[bins[r] * classes + ds.records[r].label] += 1.0;
            bin_totals[bins[r]] += 1.0;
        }
        double conditional = 0.0;
        for (std::size_t b = 0; b < bin_count; ++b) {
            if (bin_totals[b] == 0) continue;
            std::vector<double> slice(joint.begin() + b * classes,
                                      joint.begin() + (b + 1) * classes);
            conditional += (bin_totals[b] / n) * entropy(slice, bin_totals[b]);
        }
        ranking.entries.push_back({f, class_entropy - conditional});
    }
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranking;
}

Dataset project(const Dataset& ds, const std::vector<std::size_t>& features) {
    if (features.empty()) throw DataError("cannot project onto an empty feature set");
    std::vector<std::size_t> sorted = features;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<FeatureInfo> projected;
    for (std::size_t f : sorted) {
        if (f >= ds.schema.feature_count()) {
            throw DataError("feature index " + std::to_string(f) + " out of range");
        }
        projected.push_back(ds.schema.feature(f));
    }
    Dataset out;
    out.schema = FeatureSchema(std::move(projected), ds.schema.class_values());
    out.records.reserve(ds.size());
    for (const auto& rec : ds.records) {
        Record r;
        r.values.reserve(sorted.size());
        for (std::size_t f : sorted) r.values.push_back(rec.values[f]);
        r.label = rec.label;
        out.records.push_back(std::move(r));
    }
    return out;
}

namespace {

double subset_score(const Dataset& ds, const Learner& evaluator,
                    const std::vector<std::size_t>& subset, const WrapperOptions& options) {
    return cross_validate(evaluator, project(ds, subset), options.folds, options.seed).accuracy;
}

FeatureSubset greedy_forward(const Dataset& ds, const Learner& evaluator,
                             const WrapperOptions& options) {
    const std::size_t features = ds.schema.feature_count();
    std::vector<std::size_t> current;
    double current_score = -1.0;

    while (options.max_features == 0 || current.size() < options.max_features) {
        std::vector<std::size_t> candidates;
        for (std::size_t f = 0; f < features; ++f) {
            if (!std::binary_search(current.begin(), current.end(), f)) {
                candidates.push_back(f);
            }
        }
        if (candidates.empty()) break;

        std::vector<double> scores(candidates.size());
        parallel_for(candidates.size(), [&](std::size_t c) {
            std::vector<std::size_t> trial = current;
            trial.insert(std::lower_bound(trial.begin(), trial.end(), candidates[c]),
                         candidates[c]);
            scores[c] = subset_score(ds, evaluator, trial, options);
        });
        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c) {
            if (scores[c] > scores[best]) best = c;  // ties keep the lower index
        }
        if (!(scores[best] > current_score)) break;  // no strict improvement
        current.insert(std::lower_bound(current.begin(), current.end(), candidates[best]),
                       candidates[best]);
        current_score = scores[best];
    }
    if (current.empty()) throw ModelError("wrapper search found no usable feature");
    return {current, current_score};
}

FeatureSubset best_first(const Dataset& ds, const Learner& evaluator,
                         const WrapperOptions& options) {
    const std::size_t features = ds.schema.feature_count();
    // open list ordered by (score desc, subset lexicographic asc)
    using Entry = std::pair<double, std::vector<std::size_t>>;
    auto better = [](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    std::vector<Entry> open;
    std::set<std::vector<std::size_t>> evaluated;

    auto evaluate = [&](const std::vector<std::size_t>& subset) {
        return subset_score(ds, evaluator, subset, options);
    };

    FeatureSubset best_seen;
    best_seen.achieved_score = -1.0;
    for (std::size_t f = 0; f < features; ++f) {
        std::vector<std::size_t> subset{f};
        const double score = evaluate(subset);
        evaluated.insert(subset);
        open.push_back({score, subset});
        if (score > best_seen.achieved_score) best_seen = {subset, score};
    }

    int stale = 0;
    while (!open.empty() && stale < options.best_first_patience) {
        auto it = std::min_element(open.begin(), open.end(),
                                   [&](const Entry& a, const Entry& b) { return better(a, b); });
        Entry entry = *it;
        open.erase(it);
        if (options.max_features > 0 && entry.second.size() >= options.max_features) continue;

        bool improved = false;
        for (std::size_t f = 0; f < features; ++f) {
            if (std::binary_search(entry.second.begin(), entry.second.end(), f)) continue;
            std::vector<std::size_t> subset = entry.second;
            subset.insert(std::lower_bound(subset.begin(), subset.end(), f), f);
            if (!evaluated.insert(subset).second) continue;
            const double score = evaluate(subset);
            open.push_back({score, subset});
            if (score > best_seen.achieved_score) {
                best_seen = {subset, score};
                improved = true;
            }
        }
        stale = improved ? 0 : stale + 1;
    }
    return best_seen;
}

}  // namespace

FeatureSubset wrapper_search(const Dataset& ds, const Learner& evaluator,
                             const WrapperOptions& options) {
    if (ds.records.empty()) throw DataError("cannot run wrapper search on an empty dataset");
    if (options.folds < 2) throw UsageError("wrapper search needs at least 2 folds");
    switch (options.strategy) {
        case WrapperStrategy::GreedyForward: return greedy_forward(ds, evaluator, options);
        case WrapperStrategy::BestFirst: return best_first(ds, evaluator, options);
    }
    throw UsageError("unknown wrapper strategy");
}

}  // namespace nids
