#include "blendids/tree.hpp"

#include <algorithm>
#include <numeric>

#include "blendids/errors.hpp"

namespace blendids {

double gini_impurity(std::span<const double> counts) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (total <= 0.0) return 0.0;
    double sq = 0.0;
    for (double c : counts) {
        const double p = c / total;
        sq += p * p;
    }
    return 1.0 - sq;
}

namespace {

struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double child_gini = 0.0;
};

// Sweeps the sorted values of one feature, tracking class counts left of each
// candidate midpoint. Returns the best valid threshold for this feature.
Split best_split_for_feature(const Matrix& x, std::span<const int> y,
                             std::vector<std::size_t>& rows, std::size_t feature,
                             std::span<const double> node_counts,
                             std::size_t min_samples_leaf) {
    std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        return x.at(a, feature) < x.at(b, feature);
    });

    const std::size_t n = rows.size();
    const double total = static_cast<double>(n);
    std::vector<double> left_counts(node_counts.size(), 0.0);
    std::vector<double> right_counts(node_counts.begin(), node_counts.end());

    Split best;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t cls = static_cast<std::size_t>(y[rows[i]]);
        left_counts[cls] += 1.0;
        right_counts[cls] -= 1.0;

        const double lo = x.at(rows[i], feature);
        const double hi = x.at(rows[i + 1], feature);
        if (lo == hi) continue;

        const std::size_t left_n = i + 1;
        const std::size_t right_n = n - left_n;
        if (left_n < min_samples_leaf || right_n < min_samples_leaf) continue;

        const double g = (static_cast<double>(left_n) / total) * gini_impurity(left_counts) +
                         (static_cast<double>(right_n) / total) * gini_impurity(right_counts);
        const double threshold = lo + (hi - lo) / 2.0;
        if (!best.found || g < best.child_gini ||
            (g == best.child_gini && threshold < best.threshold)) {
            best = {true, feature, threshold, g};
        }
    }
    return best;
}

struct Grower {
    const Matrix& x;
    std::span<const int> y;
    int classes;
    const TreeGrowth& growth;
    std::mt19937_64* rng;
    TreeParams tree;

    std::vector<std::size_t> candidate_features() {
        std::vector<std::size_t> features(x.cols);
        std::iota(features.begin(), features.end(), 0);
        if (growth.features_per_split > 0 && growth.features_per_split < x.cols) {
            std::shuffle(features.begin(), features.end(), *rng);
            features.resize(growth.features_per_split);
            std::sort(features.begin(), features.end());
        }
        return features;
    }

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        std::vector<double> counts(static_cast<std::size_t>(classes), 0.0);
        for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])] += 1.0;

        const bool pure = gini_impurity(counts) == 0.0;
        const bool at_depth = growth.max_depth > 0 && depth >= growth.max_depth;
        const bool too_small = rows.size() < 2 * growth.min_samples_leaf || rows.size() < 2;

        Split best;
        if (!pure && !at_depth && !too_small) {
            std::vector<std::size_t> scratch = rows;
            for (std::size_t f : candidate_features()) {
                const Split s = best_split_for_feature(x, y, scratch, f, counts,
                                                       growth.min_samples_leaf);
                if (s.found && (!best.found || s.child_gini < best.child_gini ||
                                (s.child_gini == best.child_gini && s.feature < best.feature) ||
                                (s.child_gini == best.child_gini && s.feature == best.feature &&
                                 s.threshold < best.threshold))) {
                    best = s;
                }
            }
            // A split that cannot reduce impurity is not worth the node.
            if (best.found && best.child_gini >= gini_impurity(counts) - 1e-12) {
                best.found = false;
            }
        }

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        if (!best.found) {
            tree.nodes[static_cast<std::size_t>(node_index)].counts = std::move(counts);
            return node_index;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (x.at(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const int left = build(std::move(left_rows), depth + 1);
        const int right = build(std::move(right_rows), depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
        node.feature = static_cast<int>(best.feature);
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        return node_index;
    }
};

const TreeNode& route(const TreeParams& tree, std::span<const double> x) {
    const TreeNode* node = &tree.nodes.at(0);
    while (node->feature >= 0) {
        const std::size_t next = static_cast<std::size_t>(
            x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                          : node->right);
        node = &tree.nodes[next];
    }
    return *node;
}

} // namespace

TreeParams grow_tree(const Matrix& x, std::span<const int> y,
                     std::span<const std::size_t> rows, int classes,
                     const TreeGrowth& growth, std::mt19937_64* rng) {
    if (rows.empty()) throw DataError("cannot grow a tree from zero rows");
    Grower grower{x, y, classes, growth, rng, {}};
    grower.build(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
    return std::move(grower.tree);
}

int tree_predict(const TreeParams& tree, std::span<const double> x) {
    const auto& counts = route(tree, x).counts;
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

std::span<const double> tree_leaf_counts(const TreeParams& tree, std::span<const double> x) {
    return route(tree, x).counts;
}

} // namespace blendids
