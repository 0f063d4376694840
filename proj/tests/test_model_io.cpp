#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nids/errors.hpp"
#include "nids/model_io.hpp"
#include "test_util.hpp"

using namespace nids;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

AlgorithmOptions fast_options(std::uint64_t seed) {
    AlgorithmOptions o;
    o.seed = seed;
    o.bins = 5;
    o.forest.tree_count = 8;
    return o;
}

}  // namespace

TEST_CASE("model save/load round-trip preserves predictions exactly") {
    testutil::TempDir tmp;
    Dataset ds = testutil::separable_dataset(40, 12);

    for (const std::string& algo : known_algorithms()) {
        CAPTURE(algo);
        auto learner = make_learner(algo, fast_options(7));
        auto model = learner->train_model(ds);
        const auto path = tmp.path(algo + ".model");
        save_model(path, *model, ds.schema, 7, {{"algo", algo}});

        LoadedModel loaded = load_model(path);
        CHECK(loaded.algorithm == algo);
        CHECK(loaded.seed == 7);
        CHECK(loaded.schema == ds.schema);
        CHECK(loaded.config.at("algo") == algo);
        for (const auto& rec : ds.records) {
            ClassDistribution a = model->predict(rec);
            ClassDistribution b = loaded.classifier->predict(rec);
            CHECK(a.probabilities == b.probabilities);  // bit-exact
        }
    }
}

TEST_CASE("filter-nb learner round-trips too") {
    testutil::TempDir tmp;
    Dataset ds = testutil::separable_dataset(30, 3);
    auto learner = make_filter_nb_learner(2);
    auto model = learner->train_model(ds);
    const auto path = tmp.path("filter.model");
    save_model(path, *model, ds.schema, 0, {});
    LoadedModel loaded = load_model(path);
    for (const auto& rec : ds.records) {
        CHECK(model->predict(rec).probabilities ==
              loaded.classifier->predict(rec).probabilities);
    }
}

TEST_CASE("identical models serialize to identical bytes") {
    testutil::TempDir tmp;
    Dataset ds = testutil::separable_dataset(30, 21);
    auto learner = make_learner("rforest", fast_options(99));
    auto m1 = learner->train_model(ds);
    auto m2 = learner->train_model(ds);
    const auto p1 = tmp.path("a.model");
    const auto p2 = tmp.path("b.model");
    save_model(p1, *m1, ds.schema, 99, {{"trees", "8"}});
    save_model(p2, *m2, ds.schema, 99, {{"trees", "8"}});
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("loader rejects what it should") {
    testutil::TempDir tmp;
    Dataset ds = testutil::separable_dataset(10, 2);
    auto model = make_learner("nb", fast_options(1))->train_model(ds);
    const auto path = tmp.path("m.model");
    save_model(path, *model, ds.schema, 1, {});

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_model(tmp.path("absent.model")), ModelError);
    }
    SUBCASE("wrong magic") {
        testutil::write_file(tmp.path("junk.model"), "not-a-model 1\n");
        CHECK_THROWS_AS(load_model(tmp.path("junk.model")), ModelError);
    }
    SUBCASE("unsupported version") {
        std::string content = slurp(path);
        content.replace(content.find("nids-model 1"), 12, "nids-model 9");
        testutil::write_file(tmp.path("v9.model"), content);
        CHECK_THROWS_AS(load_model(tmp.path("v9.model")), ModelError);
    }
    SUBCASE("truncated payload") {
        std::string content = slurp(path);
        testutil::write_file(tmp.path("cut.model"), content.substr(0, content.size() / 2));
        CHECK_THROWS_AS(load_model(tmp.path("cut.model")), ModelError);
    }
    SUBCASE("fingerprint corruption") {
        std::string content = slurp(path);
        auto pos = content.find("schema-fingerprint ");
        content.replace(pos + 19, 1, content[pos + 19] == '1' ? "2" : "1");
        testutil::write_file(tmp.path("bad.model"), content);
        CHECK_THROWS_AS(load_model(tmp.path("bad.model")), ModelError);
    }
}
