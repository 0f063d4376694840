#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nids/dataset.hpp"
#include "nids/rng.hpp"

namespace testutil {

/// Scratch directory removed when the object dies.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        dir_ = std::filesystem::temp_directory_path() /
               ("nids_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

/// Schema with the given numeric feature count plus one 3-valued nominal,
/// class values {normal, anomaly}.
inline nids::FeatureSchema small_schema(std::size_t numeric_features = 2) {
    std::vector<nids::FeatureInfo> f;
    for (std::size_t i = 0; i < numeric_features; ++i) {
        f.push_back({"num" + std::to_string(i), nids::FeatureKind::Numeric, {}});
    }
    f.push_back({"proto", nids::FeatureKind::Nominal, {"tcp", "udp", "icmp"}});
    return nids::FeatureSchema(std::move(f), {"normal", "anomaly"});
}

/// Dataset the classifiers can actually learn: anomaly records live in a
/// shifted numeric range and prefer a different protocol.
inline nids::Dataset separable_dataset(std::size_t per_class, std::uint64_t seed,
                                       std::size_t numeric_features = 2) {
    nids::Dataset ds;
    ds.schema = small_schema(numeric_features);
    nids::Rng rng(seed);
    for (std::size_t i = 0; i < per_class; ++i) {
        nids::Record normal;
        for (std::size_t c = 0; c < numeric_features; ++c) {
            normal.values.push_back(rng.next_double() * 4.0);
        }
        normal.values.push_back(static_cast<double>(rng.next_below(2)));  // tcp/udp
        normal.label = 0;
        ds.records.push_back(std::move(normal));

        nids::Record anomaly;
        for (std::size_t c = 0; c < numeric_features; ++c) {
            anomaly.values.push_back(6.0 + rng.next_double() * 4.0);
        }
        anomaly.values.push_back(2.0);  // icmp
        anomaly.label = 1;
        ds.records.push_back(std::move(anomaly));
    }
    return ds;
}

/// Purely nominal dataset (for the discrete-only learners).
inline nids::Dataset nominal_dataset(std::size_t per_class, std::uint64_t seed) {
    std::vector<nids::FeatureInfo> f = {
        {"a", nids::FeatureKind::Nominal, {"x", "y", "z"}},
        {"b", nids::FeatureKind::Nominal, {"p", "q"}},
    };
    nids::Dataset ds;
    ds.schema = nids::FeatureSchema(std::move(f), {"normal", "anomaly"});
    nids::Rng rng(seed);
    for (std::size_t i = 0; i < per_class; ++i) {
        // class 0 concentrates on a=x, b=p; class 1 on a=z, b=q; 10% noise
        nids::Record r0{{0.0, 0.0}, 0};
        if (rng.next_below(10) == 0) r0.values[0] = 1.0;
        ds.records.push_back(r0);
        nids::Record r1{{2.0, 1.0}, 1};
        if (rng.next_below(10) == 0) r1.values[1] = 0.0;
        ds.records.push_back(r1);
    }
    return ds;
}

}  // namespace testutil
