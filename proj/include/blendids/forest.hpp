#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blendids/base_model.hpp"
#include "blendids/matrix.hpp"
#include "blendids/meta.hpp"

namespace blendids {

struct ForestConfig {
    std::size_t tree_count = 100;
    std::size_t features_per_split = 0;   // 0 = ceil(sqrt(column count))
    std::size_t max_depth = 12;           // 0 = unlimited
    std::size_t min_samples_leaf = 2;
    bool bootstrap = true;                // off = every tree sees all rows (test hook)
};

struct ForestModel {
    std::vector<TreeParams> trees;
    std::vector<std::uint64_t> tree_seeds;
    std::vector<std::vector<std::size_t>> oob_indices;   // bookkeeping only
    int classes = 0;
    std::size_t feature_count = 0;
    std::size_t features_per_split = 0;
};

// Bagged CART: each tree fits an n-sized bootstrap resample under its own
// derived seed, considering features_per_split freshly drawn features at
// every node.
ForestModel fit_forest(const MetaDataset& meta, const ForestConfig& config, std::uint64_t seed);
ForestModel fit_forest(const Matrix& x, std::span<const int> y, int classes,
                       const ForestConfig& config, std::uint64_t seed);

// Majority vote over the trees, ties to the lowest class id.
int predict_forest(const ForestModel& model, std::span<const double> row);
std::vector<int> predict_forest(const ForestModel& model, const Matrix& rows);

// Vote share per class; sums to 1.
std::vector<double> forest_vote_fractions(const ForestModel& model, std::span<const double> row);

} // namespace blendids
