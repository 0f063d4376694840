#include "nids/model_io.hpp"

#include <fstream>
#include <sstream>

#include "nids/errors.hpp"
#include "nids/textio.hpp"

namespace nids {

namespace {

bool is_clean_token(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

void write_schema(std::ostream& out, const FeatureSchema& schema) {
    out << "schema " << schema.feature_count() << ' ' << schema.class_count() << ' '
        << (schema.has_difficulty_column() ? 1 : 0) << '\n';
    for (const auto& f : schema.features()) {
        if (!is_clean_token(f.name)) {
            throw ModelError("feature name '" + f.name + "' cannot be serialized");
        }
        out << "feature " << f.name;
        if (f.kind == FeatureKind::Numeric) {
            out << " numeric\n";
        } else {
            out << " nominal " << f.values.size();
            for (const auto& v : f.values) {
                if (!is_clean_token(v)) {
                    throw ModelError("nominal value '" + v + "' cannot be serialized");
                }
                out << ' ' << v;
            }
            out << '\n';
        }
    }
    out << "classes";
    for (const auto& c : schema.class_values()) {
        if (!is_clean_token(c)) throw ModelError("class label cannot be serialized");
        out << ' ' << c;
    }
    out << '\n';
}

std::string next_token(std::istream& in) {
    std::string token;
    if (!(in >> token)) throw ModelError("model file truncated");
    return token;
}

std::size_t next_size(std::istream& in) {
    try {
        return static_cast<std::size_t>(std::stoull(next_token(in)));
    } catch (const ModelError&) {
        throw;
    } catch (...) {
        throw ModelError("malformed integer in model file header");
    }
}

FeatureSchema read_schema(std::istream& in) {
    if (next_token(in) != "schema") throw ModelError("model file: missing schema section");
    const std::size_t features = next_size(in);
    const std::size_t classes = next_size(in);
    const bool difficulty = next_size(in) != 0;
    std::vector<FeatureInfo> infos;
    infos.reserve(features);
    for (std::size_t f = 0; f < features; ++f) {
        if (next_token(in) != "feature") throw ModelError("model file: malformed schema");
        FeatureInfo info;
        info.name = next_token(in);
        const std::string kind = next_token(in);
        if (kind == "numeric") {
            info.kind = FeatureKind::Numeric;
        } else if (kind == "nominal") {
            info.kind = FeatureKind::Nominal;
            info.values.resize(next_size(in));
            for (auto& v : info.values) v = next_token(in);
        } else {
            throw ModelError("model file: unknown feature kind '" + kind + "'");
        }
        infos.push_back(std::move(info));
    }
    if (next_token(in) != "classes") throw ModelError("model file: missing class list");
    std::vector<std::string> class_values(classes);
    for (auto& c : class_values) c = next_token(in);
    return FeatureSchema(std::move(infos), std::move(class_values), difficulty);
}

}  // namespace

void save_model(const std::string& path, const TrainedModel& model,
                const FeatureSchema& schema, std::uint64_t seed,
                const std::map<std::string, std::string>& config) {
    std::ostringstream out;
    out << "nids-model " << kModelFormatVersion << '\n';
    out << "algorithm " << model.algorithm() << '\n';
    out << "schema-fingerprint " << schema.fingerprint() << '\n';
    out << "seed " << seed << '\n';
    out << "config " << config.size() << '\n';
    for (const auto& [key, value] : config) {
        if (!is_clean_token(key) || !is_clean_token(value)) {
            throw ModelError("config entries must be single tokens");
        }
        out << key << ' ' << value << '\n';
    }
    write_schema(out, schema);
    out << "payload\n";
    model.save_payload(out);
    out << "end\n";
    write_file_atomic(path, out.str());
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'");

    LoadedModel loaded;
    if (next_token(in) != "nids-model") {
        throw ModelError("'" + path + "' is not a model file");
    }
    loaded.format_version = static_cast<int>(next_size(in));
    if (loaded.format_version != kModelFormatVersion) {
        throw ModelError("unsupported model format version " +
                         std::to_string(loaded.format_version));
    }
    if (next_token(in) != "algorithm") throw ModelError("model file: missing algorithm");
    loaded.algorithm = next_token(in);
    if (next_token(in) != "schema-fingerprint") {
        throw ModelError("model file: missing schema fingerprint");
    }
    const std::uint64_t claimed_fingerprint = next_size(in);
    if (next_token(in) != "seed") throw ModelError("model file: missing seed");
    loaded.seed = next_size(in);
    if (next_token(in) != "config") throw ModelError("model file: missing config echo");
    const std::size_t config_entries = next_size(in);
    for (std::size_t i = 0; i < config_entries; ++i) {
        const std::string key = next_token(in);
        loaded.config[key] = next_token(in);
    }
    loaded.schema = read_schema(in);
    if (loaded.schema.fingerprint() != claimed_fingerprint) {
        throw ModelError("model file: schema fingerprint mismatch (corrupted file?)");
    }
    if (next_token(in) != "payload") throw ModelError("model file: missing payload");
    loaded.classifier = read_model_payload(loaded.algorithm, in);
    if (next_token(in) != "end") throw ModelError("model file: missing end marker");
    return loaded;
}

}  // namespace nids
