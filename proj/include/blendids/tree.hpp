#pragma once

#include <random>
#include <span>
#include <vector>

#include "blendids/base_model.hpp"
#include "blendids/matrix.hpp"

namespace blendids {

// 1 - sum(p_k^2) over the class proportions in counts.
double gini_impurity(std::span<const double> counts);

struct TreeGrowth {
    std::size_t max_depth = 12;          // 0 = unlimited
    std::size_t min_samples_leaf = 2;
    std::size_t features_per_split = 0;  // 0 = consider every feature
};

// CART growth over the given row subset. At each node the candidate
// thresholds are the midpoints between consecutive sorted unique values; the
// (feature, threshold) pair minimizing the weighted child Gini wins, ties to
// the lower feature index then lower threshold. rng drives the per-node
// feature subsample and may be null when features_per_split is 0.
TreeParams grow_tree(const Matrix& x, std::span<const int> y,
                     std::span<const std::size_t> rows, int classes,
                     const TreeGrowth& growth, std::mt19937_64* rng);

int tree_predict(const TreeParams& tree, std::span<const double> x);
std::span<const double> tree_leaf_counts(const TreeParams& tree, std::span<const double> x);

} // namespace blendids
