#include "nids/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nids/errors.hpp"
#include "nids/rng.hpp"
#include "nids/textio.hpp"

namespace nids {

namespace {

int resolve_label(const FeatureSchema& schema, LabelMode mode, std::string_view raw,
                  std::size_t line_no) {
    int idx = -1;
    switch (mode) {
        case LabelMode::Direct:
            idx = schema.class_index(raw);
            break;
        case LabelMode::Binary:
            idx = raw == "normal" ? schema.class_index("normal")
                                  : schema.class_index("anomaly");
            break;
        case LabelMode::Category5: {
            AttackCategory cat;
            try {
                cat = map_attack_category(raw);
            } catch (const DataError& e) {
                throw DataError("line " + std::to_string(line_no) + ": " + e.what());
            }
            idx = schema.class_index(attack_category_name(cat));
            break;
        }
    }
    if (idx < 0) {
        throw DataError("line " + std::to_string(line_no) + ": class label '" +
                        std::string(raw) + "' does not resolve against this schema");
    }
    return idx;
}

double parse_feature(const FeatureSchema& schema, std::size_t col, std::string_view token,
                     std::size_t line_no) {
    const FeatureInfo& info = schema.feature(col);
    if (info.kind == FeatureKind::Nominal) {
        int idx = schema.nominal_index(col, token);
        if (idx < 0) {
            throw DataError("line " + std::to_string(line_no) + ", column " +
                            std::to_string(col + 1) + " (" + info.name +
                            "): unknown nominal value '" + std::string(token) + "'");
        }
        return static_cast<double>(idx);
    }
    double v;
    if (!parse_double(token, v)) {
        throw DataError("line " + std::to_string(line_no) + ", column " +
                        std::to_string(col + 1) + " (" + info.name +
                        "): non-numeric token '" + std::string(token) + "'");
    }
    return v;
}

std::string read_whole_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw DataError("read failed for '" + path + "'");
    return std::move(buf).str();
}

}  // namespace

void Dataset::validate() const {
    if (records.empty()) throw DataError("dataset has no records");
    const std::size_t fc = schema.feature_count();
    for (std::size_t r = 0; r < records.size(); ++r) {
        const Record& rec = records[r];
        if (rec.values.size() != fc) {
            throw DataError("record " + std::to_string(r) + ": expected " + std::to_string(fc) +
                            " values, got " + std::to_string(rec.values.size()));
        }
        if (rec.label < 0 || static_cast<std::size_t>(rec.label) >= schema.class_count()) {
            throw DataError("record " + std::to_string(r) + ": label out of range");
        }
        for (std::size_t c = 0; c < fc; ++c) {
            if (schema.feature(c).kind == FeatureKind::Nominal) {
                const double v = rec.values[c];
                if (v < 0 || v >= static_cast<double>(schema.feature(c).values.size()) ||
                    v != std::floor(v)) {
                    throw DataError("record " + std::to_string(r) + ", feature " +
                                    schema.feature(c).name + ": nominal index out of range");
                }
            }
        }
    }
}

Dataset load_csv(const std::string& path, const FeatureSchema& schema, LabelMode mode) {
    const std::string content = read_whole_file(path);
    Dataset ds;
    ds.schema = schema;
    const std::size_t fc = schema.feature_count();

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line(content.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;

        auto fields = split(line, ',');
        const bool with_difficulty =
            schema.has_difficulty_column() && fields.size() == fc + 2;
        if (fields.size() != fc + 1 && !with_difficulty) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(fc + 1) +
                            (schema.has_difficulty_column() ? " or " + std::to_string(fc + 2)
                                                            : std::string()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        Record rec;
        rec.values.resize(fc);
        for (std::size_t c = 0; c < fc; ++c) {
            rec.values[c] = parse_feature(schema, c, trim(fields[c]), line_no);
        }
        rec.label = resolve_label(schema, mode, trim(fields[fc]), line_no);
        if (with_difficulty) {
            double difficulty;
            if (!parse_double(trim(fields[fc + 1]), difficulty)) {
                throw DataError("line " + std::to_string(line_no) +
                                ": non-numeric difficulty score");
            }
        }
        ds.records.push_back(std::move(rec));
    }
    if (ds.records.empty()) throw DataError("'" + path + "' contains no records");
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::string out;
    const std::size_t fc = ds.schema.feature_count();
    for (const Record& rec : ds.records) {
        for (std::size_t c = 0; c < fc; ++c) {
            const FeatureInfo& info = ds.schema.feature(c);
            if (info.kind == FeatureKind::Nominal) {
                out += info.values[static_cast<std::size_t>(rec.values[c])];
            } else {
                out += format_double(rec.values[c]);
            }
            out += ',';
        }
        out += ds.schema.class_values()[static_cast<std::size_t>(rec.label)];
        out += '\n';
    }
    write_file_atomic(path, out);
}

namespace {

struct ArffAttribute {
    std::string name;
    FeatureKind kind;
    std::vector<std::string> values;
};

ArffAttribute parse_arff_attribute(std::string_view rest, std::size_t line_no) {
    rest = trim(rest);
    // name is the first whitespace-delimited token (quoting unsupported)
    std::size_t sp = 0;
    while (sp < rest.size() && !std::isspace(static_cast<unsigned char>(rest[sp]))) ++sp;
    if (sp == 0 || sp == rest.size()) {
        throw DataError("line " + std::to_string(line_no) + ": malformed @attribute");
    }
    ArffAttribute attr;
    attr.name = std::string(rest.substr(0, sp));
    std::string_view type = trim(rest.substr(sp));
    if (type.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": @attribute missing a type");
    }
    if (type.front() == '{') {
        if (type.back() != '}') {
            throw DataError("line " + std::to_string(line_no) + ": unterminated nominal list");
        }
        attr.kind = FeatureKind::Nominal;
        for (auto v : split(type.substr(1, type.size() - 2), ',')) {
            auto t = trim(v);
            // tolerate the single-quoted values some distributions use
            if (t.size() >= 2 && t.front() == '\'' && t.back() == '\'') {
                t = t.substr(1, t.size() - 2);
            }
            if (t.empty()) {
                throw DataError("line " + std::to_string(line_no) + ": empty nominal value");
            }
            attr.values.emplace_back(t);
        }
        if (attr.values.empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty nominal list");
        }
        return attr;
    }
    const std::string lower = to_lower(type);
    if (lower == "numeric" || lower == "real" || lower == "integer") {
        attr.kind = FeatureKind::Numeric;
        return attr;
    }
    throw DataError("line " + std::to_string(line_no) + ": unsupported attribute kind '" +
                    std::string(type) + "'");
}

}  // namespace

Dataset load_arff(const std::string& path) {
    const std::string content = read_whole_file(path);

    std::vector<ArffAttribute> attrs;
    bool saw_relation = false;
    bool in_data = false;

    Dataset ds;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view raw(content.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') continue;

        if (!in_data) {
            // header directives are case-insensitive
            std::size_t sp = 0;
            while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
            const std::string directive = to_lower(line.substr(0, sp));
            if (directive == "@relation") {
                saw_relation = true;
            } else if (directive == "@attribute") {
                attrs.push_back(parse_arff_attribute(line.substr(sp), line_no));
            } else if (directive == "@data") {
                if (!saw_relation) {
                    throw DataError("line " + std::to_string(line_no) + ": @data before @relation");
                }
                if (attrs.size() < 2) {
                    throw DataError("line " + std::to_string(line_no) +
                                    ": need at least one feature and a class attribute");
                }
                if (attrs.back().kind != FeatureKind::Nominal) {
                    throw DataError("class attribute '" + attrs.back().name +
                                    "' must be nominal");
                }
                std::vector<FeatureInfo> features;
                for (std::size_t i = 0; i + 1 < attrs.size(); ++i) {
                    features.push_back({attrs[i].name, attrs[i].kind, attrs[i].values});
                }
                ds.schema = FeatureSchema(std::move(features), attrs.back().values);
                in_data = true;
            } else {
                throw DataError("line " + std::to_string(line_no) + ": unexpected directive '" +
                                std::string(line.substr(0, sp)) + "'");
            }
            continue;
        }

        const std::size_t fc = ds.schema.feature_count();
        auto fields = split(line, ',');
        if (fields.size() != fc + 1) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(fc + 1) + " fields, got " +
                            std::to_string(fields.size()));
        }
        Record rec;
        rec.values.resize(fc);
        for (std::size_t c = 0; c < fc; ++c) {
            auto t = trim(fields[c]);
            if (t.size() >= 2 && t.front() == '\'' && t.back() == '\'') {
                t = t.substr(1, t.size() - 2);
            }
            rec.values[c] = parse_feature(ds.schema, c, t, line_no);
        }
        auto lt = trim(fields[fc]);
        if (lt.size() >= 2 && lt.front() == '\'' && lt.back() == '\'') {
            lt = lt.substr(1, lt.size() - 2);
        }
        rec.label = resolve_label(ds.schema, LabelMode::Direct, lt, line_no);
        ds.records.push_back(std::move(rec));
    }
    if (!in_data) throw DataError("'" + path + "' has no @data section");
    if (ds.records.empty()) throw DataError("'" + path + "' contains no records");
    return ds;
}

FoldPlan stratified_folds(const Dataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw UsageError("fold count must be at least 2");
    if (static_cast<std::size_t>(k) > ds.size()) {
        throw DataError("fold count " + std::to_string(k) + " exceeds record count " +
                        std::to_string(ds.size()));
    }
    const std::size_t classes = ds.schema.class_count();
    std::vector<std::vector<std::uint32_t>> by_class(classes);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        by_class[static_cast<std::size_t>(ds.records[i].label)].push_back(
            static_cast<std::uint32_t>(i));
    }

    FoldPlan plan;
    plan.assignments.assign(ds.size(), 0);
    plan.k = k;
    plan.seed = seed;

    Rng rng(seed);
    int next_fold = 0;  // carried across classes so total sizes stay balanced
    for (auto& group : by_class) {
        rng.shuffle(group);
        for (std::uint32_t idx : group) {
            plan.assignments[idx] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return plan;
}

Dataset sample_fraction(const Dataset& ds, double fraction, std::uint64_t seed,
                        bool stratified) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw UsageError("fraction must be in (0, 1]");
    }
    Rng rng(seed);
    std::vector<std::uint32_t> chosen;
    if (stratified) {
        const std::size_t classes = ds.schema.class_count();
        std::vector<std::vector<std::uint32_t>> by_class(classes);
        for (std::size_t i = 0; i < ds.records.size(); ++i) {
            by_class[static_cast<std::size_t>(ds.records[i].label)].push_back(
                static_cast<std::uint32_t>(i));
        }
        for (auto& group : by_class) {
            const auto want = static_cast<std::size_t>(
                std::llround(fraction * static_cast<double>(group.size())));
            rng.partial_shuffle(group, want);
            chosen.insert(chosen.end(), group.begin(), group.begin() + want);
        }
    } else {
        std::vector<std::uint32_t> all(ds.size());
        std::iota(all.begin(), all.end(), 0u);
        const auto want = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(all.size())));
        rng.partial_shuffle(all, want);
        chosen.assign(all.begin(), all.begin() + want);
    }
    if (chosen.empty()) throw DataError("sample is empty at this fraction");
    std::sort(chosen.begin(), chosen.end());

    Dataset out;
    out.schema = ds.schema;
    out.records.reserve(chosen.size());
    for (std::uint32_t idx : chosen) out.records.push_back(ds.records[idx]);
    return out;
}

}  // namespace nids
