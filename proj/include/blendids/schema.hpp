#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace blendids {

enum class ColumnKind { Numeric, Categorical, Label };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
};

// Describes one dataset layout: ordered columns plus the label encoding.
// The encoding maps raw label strings to class ids; several raw values may
// share an id (e.g. collapsing attack categories to a binary target), but ids
// must cover 0..C-1 without gaps. An empty encoding means "infer at load
// time, lexicographic over the values seen".
struct FeatureSchema {
    std::string name;
    std::vector<Column> columns;
    std::map<std::string, int> label_encoding;

    std::size_t label_index() const;
    std::size_t feature_count() const { return columns.size() - 1; }
    int class_count() const;

    // Throws ConfigError on a malformed schema: duplicate column names, not
    // exactly one label column, or a label encoding with id gaps.
    void validate() const;
};

ColumnKind column_kind_from_string(const std::string& s);
std::string to_string(ColumnKind kind);

FeatureSchema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const FeatureSchema& schema);

FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const FeatureSchema& schema, const std::filesystem::path& path);

} // namespace blendids
