#pragma once

#include <string>

#include "nids/eval.hpp"
#include "nids/featsel.hpp"

namespace nids {

/// Human-readable evaluation block in the usual comparison-table shape.
/// Timing is printed only when include_time is set (file outputs keep
/// timing out so reruns are byte-identical).
std::string render_report_text(const std::string& title, const EvalReport& report,
                               bool include_time = true);

/// Machine-readable counterparts. CSV rows carry no timing column; build
/// times go to a separate .timing.csv sidecar marked non-deterministic.
std::string report_csv_header();
std::string report_csv_row(const std::string& name, const EvalReport& report);
std::string timing_csv_header();
std::string timing_csv_row(const std::string& name, const EvalReport& report);

std::string roc_csv(const RocCurve& curve);
std::string ranking_csv(const FeatureRanking& ranking, const FeatureSchema& schema);
std::string subset_csv(const FeatureSubset& subset, const FeatureSchema& schema,
                       double final_score);

}  // namespace nids
