#include "nids/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nids/textio.hpp"

namespace nids {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string render_report_text(const std::string& title, const EvalReport& report,
                               bool include_time) {
    const auto total = report.confusion.total();
    const auto correct = report.confusion.correct();
    std::ostringstream out;
    out << "=== " << title << " ===\n";
    out << "Correctly Classified Instances    " << correct << " (" << fixed(report.accuracy * 100, 4)
        << " %)\n";
    out << "Incorrectly Classified Instances  " << (total - correct) << " ("
        << fixed((1.0 - report.accuracy) * 100, 4) << " %)\n";
    out << "Total Number of Instances         " << total << '\n';
    out << "Root mean squared error           " << fixed(report.rmse, 4) << '\n';
    out << "TP Rate                           " << fixed(report.tp_rate, 3) << '\n';
    out << "FP Rate                           " << fixed(report.fp_rate, 3) << '\n';
    out << "Precision                         " << fixed(report.precision, 3) << '\n';
    out << "Recall                            " << fixed(report.recall, 3) << '\n';
    out << "F-Measure                         " << fixed(report.f_measure, 3) << '\n';
    if (include_time) {
        out << "Model Building Time               " << fixed(report.build_time_seconds, 2)
            << " seconds\n";
    }
    out << "Confusion matrix (rows = actual):\n";
    for (std::size_t a = 0; a < report.confusion.counts.size(); ++a) {
        out << "  " << report.confusion.labels[a] << ":";
        for (std::size_t p = 0; p < report.confusion.counts[a].size(); ++p) {
            out << ' ' << report.confusion.counts[a][p];
        }
        out << '\n';
    }
    return out.str();
}

std::string report_csv_header() {
    return "name,instances,correct,accuracy,tp_rate,fp_rate,precision,recall,f_measure,rmse\n";
}

std::string report_csv_row(const std::string& name, const EvalReport& report) {
    std::ostringstream out;
    out << name << ',' << report.confusion.total() << ',' << report.confusion.correct() << ','
        << format_double(report.accuracy) << ',' << format_double(report.tp_rate) << ','
        << format_double(report.fp_rate) << ',' << format_double(report.precision) << ','
        << format_double(report.recall) << ',' << format_double(report.f_measure) << ','
        << format_double(report.rmse) << '\n';
    return out.str();
}

std::string timing_csv_header() {
    return "# build times are wall-clock and non-deterministic\nname,build_time_seconds\n";
}

std::string timing_csv_row(const std::string& name, const EvalReport& report) {
    return name + "," + format_double(report.build_time_seconds) + "\n";
}

std::string roc_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr,threshold\n";
    for (const auto& p : curve.points) {
        out += format_double(p.fpr);
        out += ',';
        out += format_double(p.tpr);
        out += ',';
        out += std::isinf(p.threshold) ? "inf" : format_double(p.threshold);
        out += '\n';
    }
    return out;
}

std::string ranking_csv(const FeatureRanking& ranking, const FeatureSchema& schema) {
    std::string out = "feature_index,feature_name,score\n";
    for (const auto& [feature, score] : ranking.entries) {
        out += std::to_string(feature);
        out += ',';
        out += schema.feature(feature).name;
        out += ',';
        out += format_double(score);
        out += '\n';
    }
    return out;
}

std::string subset_csv(const FeatureSubset& subset, const FeatureSchema& schema,
                       double final_score) {
    std::string out = "feature_index,feature_name,score\n";
    for (std::size_t feature : subset.indices) {
        out += std::to_string(feature);
        out += ',';
        out += schema.feature(feature).name;
        out += ',';
        out += format_double(final_score);
        out += '\n';
    }
    return out;
}

}  // namespace nids
