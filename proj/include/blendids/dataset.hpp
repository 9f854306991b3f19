#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blendids/matrix.hpp"
#include "blendids/schema.hpp"

namespace blendids {

// Per-column dictionaries for categorical features: column name -> raw value
// -> integer code. Built at load time (lexicographic) unless fixed dictionaries
// are supplied, in which case unseen values are an error.
using CategoricalDicts = std::map<std::string, std::map<std::string, int>>;

struct Dataset {
    Matrix features;            // n x d; may hold NaN until clean()
    std::vector<int> labels;    // class ids; -1 marks a missing label until clean()
    int class_count = 0;
    FeatureSchema schema;       // label_encoding resolved (never empty after load)
    CategoricalDicts categorical_encodings;
    std::string provenance;

    std::size_t size() const { return features.rows; }
    std::size_t feature_count() const { return features.cols; }
    bool has_labels() const { return !labels.empty(); }
};

struct LoadOptions {
    bool require_label = true;              // predict-time data may omit the label column
    const CategoricalDicts* fixed_dicts = nullptr;
};

// Reads an RFC-4180 style CSV whose header must match the schema columns in
// order. Numeric cells parse to double; the missing markers "" / "NaN" /
// "null" (case-insensitive) become NaN and are left for clean() to drop.
// Anything else unparseable in a numeric column is a DataError naming the row.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const LoadOptions& options = {});

// Writes features plus the raw label string (first encoding entry for the id).
void write_csv(const Dataset& d, const std::filesystem::path& path);

// Drops rows with missing values, then collapses exact duplicates (features
// and label identical) to their first occurrence. Idempotent.
Dataset clean(const Dataset& d);

Dataset take_rows(const Dataset& d, std::span<const std::size_t> indices);

struct ColumnRange {
    double min = 0.0;
    double max = 0.0;
};

struct MinMaxScaler {
    std::vector<ColumnRange> ranges;
    // (x - min) / (max - min), clamped to [0,1]; constant columns map to 0.
    void transform(Matrix& m) const;
    void transform_row(std::span<double> row) const;
};

std::pair<Dataset, MinMaxScaler> minmax_fit_transform(const Dataset& d);

struct ColumnMoments {
    double mean = 0.0;
    double stddev = 0.0;        // population (divide by n)
};

struct StandardScaler {
    std::vector<ColumnMoments> moments;
    // (x - mean) / stddev; zero-variance columns map to 0.
    void transform(Matrix& m) const;
    void transform_row(std::span<double> row) const;
};

std::pair<Dataset, StandardScaler> standard_fit_transform(const Dataset& d);

struct SplitPlan {
    std::vector<std::size_t> train_indices;   // sorted ascending
    std::vector<std::size_t> test_indices;    // sorted ascending
    std::pair<int, int> ratio;                // (train %, test %)
    std::uint64_t seed = 0;
};

// Seeded random split; stratified keeps per-class proportions via largest
// remainder so |train| == floor(n * train%) exactly.
SplitPlan split(const Dataset& d, std::pair<int, int> ratio, std::uint64_t seed,
                bool stratified = true);
SplitPlan split_fraction(const Dataset& d, double train_fraction, std::uint64_t seed,
                         bool stratified);

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::vector<std::size_t>> folds;   // each sorted ascending
    std::uint64_t seed = 0;
};

FoldPlan kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

} // namespace blendids
