#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "nids/discretize.hpp"
#include "nids/errors.hpp"
#include "test_util.hpp"

using namespace nids;

namespace {

Dataset one_feature(const std::vector<double>& values, const std::vector<int>& labels) {
    Dataset ds;
    ds.schema = FeatureSchema({{"x", FeatureKind::Numeric, {}}}, {"A", "B"});
    for (std::size_t i = 0; i < values.size(); ++i) {
        ds.records.push_back({{values[i]}, labels.empty() ? 0 : labels[i]});
    }
    return ds;
}

// ---- independent MDL oracle -------------------------------------------
// Evaluates the class-entropy gain of every midpoint between sorted
// adjacent values and applies the Fayyad-Irani acceptance test by hand.

double oracle_entropy(const std::vector<int>& labels) {
    std::map<int, int> n;
    for (int l : labels) n[l]++;
    double h = 0;
    for (auto& [l, c] : n) {
        double p = double(c) / double(labels.size());
        h -= p * std::log2(p);
    }
    return h;
}

void oracle_mdl(std::vector<std::pair<double, int>> sorted, std::vector<double>& cuts) {
    const std::size_t n = sorted.size();
    if (n < 2) return;
    std::vector<int> all;
    for (auto& p : sorted) all.push_back(p.second);
    double parent = oracle_entropy(all);
    double best_gain = 0, best_cut = 0;
    std::size_t best_pos = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (sorted[i].first == sorted[i + 1].first) continue;
        std::vector<int> l, r;
        for (std::size_t j = 0; j < n; ++j) (j <= i ? l : r).push_back(sorted[j].second);
        double gain = parent - (l.size() * oracle_entropy(l) + r.size() * oracle_entropy(r)) / n;
        if (gain > best_gain) {
            best_gain = gain;
            best_cut = (sorted[i].first + sorted[i + 1].first) / 2;
            best_pos = i + 1;
        }
    }
    if (best_gain == 0) return;
    std::vector<int> l, r;
    for (std::size_t j = 0; j < n; ++j) (j < best_pos ? l : r).push_back(sorted[j].second);
    auto distinct = [](const std::vector<int>& v) {
        return double(std::set<int>(v.begin(), v.end()).size());
    };
    double k = distinct(all), k1 = distinct(l), k2 = distinct(r);
    double delta = std::log2(std::pow(3.0, k) - 2) -
                   (k * parent - k1 * oracle_entropy(l) - k2 * oracle_entropy(r));
    if (best_gain <= (std::log2(double(n) - 1) + delta) / double(n)) return;
    cuts.push_back(best_cut);
    oracle_mdl({sorted.begin(), sorted.begin() + best_pos}, cuts);
    oracle_mdl({sorted.begin() + best_pos, sorted.end()}, cuts);
}

std::vector<double> oracle_mdl_cuts(const Dataset& ds, std::size_t feature) {
    std::vector<std::pair<double, int>> sorted;
    for (const auto& r : ds.records) sorted.push_back({r.values[feature], r.label});
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<double> cuts;
    oracle_mdl(sorted, cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

}  // namespace

TEST_CASE("equal-width cuts over [0,100] with 10 bins") {
    std::vector<double> values;
    for (int i = 0; i <= 100; ++i) values.push_back(i);
    Dataset ds = one_feature(values, {});
    Discretizer d = fit_discretizer(ds, {0}, DiscretizeMethod::EqualWidth, 10);
    REQUIRE(d.feature_cuts().size() == 1);
    const auto& cuts = d.feature_cuts()[0].cuts;
    REQUIRE(cuts.size() == 9);
    for (int i = 0; i < 9; ++i) CHECK(cuts[i] == doctest::Approx(10.0 * (i + 1)));
}

TEST_CASE("constant feature produces no cuts and a single bin") {
    Dataset ds = one_feature({5.0, 5.0, 5.0, 5.0}, {});
    for (auto method : {DiscretizeMethod::EqualWidth, DiscretizeMethod::EqualFrequency}) {
        Discretizer d = fit_discretizer(ds, {0}, method, 10);
        CHECK(d.feature_cuts()[0].cuts.empty());
        Dataset out = apply_discretizer(d, ds);
        CHECK(out.schema.feature(0).values == std::vector<std::string>{"bin_0"});
        for (const auto& r : out.records) CHECK(r.values[0] == 0);
    }
}

TEST_CASE("bin boundary convention is left-inclusive") {
    std::vector<double> cuts = {10.0, 20.0};
    CHECK(Discretizer::bin_of(10.0, cuts) == 1);
    CHECK(Discretizer::bin_of(9.999, cuts) == 0);
    CHECK(Discretizer::bin_of(20.0, cuts) == 2);
    CHECK(Discretizer::bin_of(-5.0, cuts) == 0);    // clamp low
    CHECK(Discretizer::bin_of(1e9, cuts) == 2);     // clamp high
}

TEST_CASE("equal-frequency collapses duplicate quantiles") {
    Dataset ds = one_feature({1, 1, 1, 1, 1, 1, 2, 3}, {});
    Discretizer d = fit_discretizer(ds, {0}, DiscretizeMethod::EqualFrequency, 4);
    const auto& cuts = d.feature_cuts()[0].cuts;
    for (std::size_t i = 1; i < cuts.size(); ++i) CHECK(cuts[i] > cuts[i - 1]);
    CHECK(cuts.size() <= 3);
    CHECK(!cuts.empty());
}

TEST_CASE("entropy-MDL accepts the single clean split") {
    Dataset ds = one_feature({1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5},
                             {0, 0, 0, 0, 1, 1, 1, 1});
    Discretizer d = fit_discretizer(ds, {0}, DiscretizeMethod::EntropyMdl, 0);
    const auto& cuts = d.feature_cuts()[0].cuts;
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0] >= 2.5);
    CHECK(cuts[0] < 3.0);
    CHECK(cuts == oracle_mdl_cuts(ds, 0));
}

TEST_CASE("entropy-MDL rejects splits on label-independent data") {
    // alternating labels: no threshold clears the MDL bar
    Dataset ds = one_feature({1, 2, 3, 4, 5, 6, 7, 8}, {0, 1, 0, 1, 0, 1, 0, 1});
    Discretizer d = fit_discretizer(ds, {0}, DiscretizeMethod::EntropyMdl, 0);
    CHECK(d.feature_cuts()[0].cuts.empty());
    CHECK(oracle_mdl_cuts(ds, 0).empty());
}

TEST_CASE("entropy-MDL matches the brute-force oracle on random data") {
    Rng rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> values;
        std::vector<int> labels;
        const std::size_t n = 5 + rng.next_below(60);
        for (std::size_t i = 0; i < n; ++i) {
            double v = double(rng.next_below(12));
            values.push_back(v);
            // correlated labels with noise so some splits are accepted
            labels.push_back(rng.next_below(4) == 0 ? int(rng.next_below(2)) : (v < 6 ? 0 : 1));
        }
        Dataset ds = one_feature(values, labels);
        Discretizer d = fit_discretizer(ds, {0}, DiscretizeMethod::EntropyMdl, 0);
        CHECK(d.feature_cuts()[0].cuts == oracle_mdl_cuts(ds, 0));
    }
}

TEST_CASE("apply transforms features to nominal bins and preserves counts") {
    Dataset ds = testutil::separable_dataset(25, 4);
    Discretizer d =
        fit_discretizer(ds, numeric_feature_indices(ds.schema), DiscretizeMethod::EqualWidth, 5);
    Dataset out = apply_discretizer(d, ds);
    CHECK(out.size() == ds.size());
    CHECK(out.schema.feature(0).kind == FeatureKind::Nominal);
    CHECK(out.schema.feature(1).kind == FeatureKind::Nominal);
    CHECK(out.schema.feature(2).kind == FeatureKind::Nominal);  // untouched nominal
    CHECK(out.schema.feature(2).values == ds.schema.feature(2).values);
    CHECK_NOTHROW(out.validate());

    SUBCASE("monotonicity: v1 <= v2 implies bin(v1) <= bin(v2)") {
        const auto& cuts = d.feature_cuts()[0].cuts;
        Rng rng(9);
        for (int i = 0; i < 200; ++i) {
            double a = rng.next_double() * 20.0 - 5.0;
            double b = rng.next_double() * 20.0 - 5.0;
            if (a > b) std::swap(a, b);
            CHECK(Discretizer::bin_of(a, cuts) <= Discretizer::bin_of(b, cuts));
        }
    }
    SUBCASE("re-discretizing the output is rejected") {
        CHECK_THROWS_AS(apply_discretizer(d, out), DataError);
        CHECK_THROWS_AS(
            fit_discretizer(out, {0}, DiscretizeMethod::EqualWidth, 5), DataError);
    }
}

TEST_CASE("fit errors") {
    Dataset ds = testutil::separable_dataset(5, 1);
    CHECK_THROWS_AS(fit_discretizer(ds, {2}, DiscretizeMethod::EqualWidth, 10), DataError);
    CHECK_THROWS_AS(fit_discretizer(ds, {99}, DiscretizeMethod::EqualWidth, 10), DataError);
    CHECK_THROWS_AS(fit_discretizer(ds, {0}, DiscretizeMethod::EqualWidth, 1), UsageError);
    Dataset empty;
    empty.schema = ds.schema;
    CHECK_THROWS_AS(fit_discretizer(empty, {0}, DiscretizeMethod::EqualWidth, 10), DataError);
}
