#include "blendids/schema.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "blendids/errors.hpp"

namespace blendids {

std::size_t FeatureSchema::label_index() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].kind == ColumnKind::Label) return i;
    }
    throw ConfigError("schema '" + name + "' has no label column");
}

int FeatureSchema::class_count() const {
    int max_id = -1;
    for (const auto& [raw, id] : label_encoding) max_id = std::max(max_id, id);
    return max_id + 1;
}

void FeatureSchema::validate() const {
    if (columns.empty()) throw ConfigError("schema '" + name + "' has no columns");

    std::set<std::string> seen;
    std::size_t label_count = 0;
    for (const auto& col : columns) {
        if (!seen.insert(col.name).second) {
            throw ConfigError("schema '" + name + "' has duplicate column '" + col.name + "'");
        }
        if (col.kind == ColumnKind::Label) ++label_count;
    }
    if (label_count != 1) {
        throw ConfigError("schema '" + name + "' must have exactly one label column, found " +
                          std::to_string(label_count));
    }

    if (!label_encoding.empty()) {
        const int classes = class_count();
        std::vector<bool> hit(static_cast<std::size_t>(classes), false);
        for (const auto& [raw, id] : label_encoding) {
            if (id < 0) throw ConfigError("schema '" + name + "': negative class id for label '" + raw + "'");
            hit[static_cast<std::size_t>(id)] = true;
        }
        for (int c = 0; c < classes; ++c) {
            if (!hit[static_cast<std::size_t>(c)]) {
                throw ConfigError("schema '" + name + "': class ids must cover 0.." +
                                  std::to_string(classes - 1) + " without gaps (missing " +
                                  std::to_string(c) + ")");
            }
        }
    }
}

ColumnKind column_kind_from_string(const std::string& s) {
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "categorical") return ColumnKind::Categorical;
    if (s == "label") return ColumnKind::Label;
    throw ConfigError("unknown column kind '" + s + "' (expected numeric, categorical or label)");
}

std::string to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Label: return "label";
    }
    return "numeric";
}

FeatureSchema schema_from_json(const nlohmann::json& j) {
    FeatureSchema schema;
    try {
        schema.name = j.at("name").get<std::string>();
        for (const auto& col : j.at("columns")) {
            schema.columns.push_back({col.at("name").get<std::string>(),
                                      column_kind_from_string(col.at("kind").get<std::string>())});
        }
        if (j.contains("label_encoding")) {
            for (const auto& [raw, id] : j.at("label_encoding").items()) {
                schema.label_encoding[raw] = id.get<int>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed schema: ") + e.what());
    }
    schema.validate();
    return schema;
}

nlohmann::json schema_to_json(const FeatureSchema& schema) {
    nlohmann::json j;
    j["name"] = schema.name;
    j["columns"] = nlohmann::json::array();
    for (const auto& col : schema.columns) {
        j["columns"].push_back({{"name", col.name}, {"kind", to_string(col.kind)}});
    }
    j["label_encoding"] = nlohmann::json::object();
    for (const auto& [raw, id] : schema.label_encoding) j["label_encoding"][raw] = id;
    return j;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open schema file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("schema file " + path.string() + " is not valid JSON: " + e.what());
    }
    return schema_from_json(j);
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write schema file " + path.string());
    out << schema_to_json(schema).dump(2) << '\n';
}

} // namespace blendids
