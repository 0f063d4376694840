#pragma once

#include <map>
#include <memory>
#include <string>

#include "nids/learners.hpp"
#include "nids/schema.hpp"

namespace nids {

/// Versioned, self-describing textual model envelope: header (algorithm,
/// schema fingerprint, seed, config echo), the training schema, then the
/// algorithm payload. Numeric values are written in shortest round-trip
/// form, so save -> load -> predict equals predict on the in-memory model
/// exactly, and identical models serialize to identical bytes.
inline constexpr int kModelFormatVersion = 1;

struct LoadedModel {
    int format_version = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    FeatureSchema schema;
    std::map<std::string, std::string> config;
    std::unique_ptr<TrainedModel> classifier;
};

void save_model(const std::string& path, const TrainedModel& model,
                const FeatureSchema& schema, std::uint64_t seed,
                const std::map<std::string, std::string>& config);

/// Rejects unknown format versions and malformed payloads (ModelError).
LoadedModel load_model(const std::string& path);

}  // namespace nids
