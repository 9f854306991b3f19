#include "blendids/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "blendids/errors.hpp"
#include "blendids/rng.hpp"
#include "blendids/tree.hpp"

namespace blendids {

ForestModel fit_forest(const Matrix& x, std::span<const int> y, int classes,
                       const ForestConfig& config, std::uint64_t seed) {
    if (x.rows == 0) throw DataError("cannot fit a forest on an empty dataset");
    if (config.tree_count == 0) throw ConfigError("forest needs at least one tree");
    const std::size_t f = config.features_per_split == 0
                              ? static_cast<std::size_t>(
                                    std::ceil(std::sqrt(static_cast<double>(x.cols))))
                              : config.features_per_split;
    if (f > x.cols) {
        throw ConfigError("features per split (" + std::to_string(f) +
                          ") exceeds column count (" + std::to_string(x.cols) + ")");
    }

    ForestModel model;
    model.classes = classes;
    model.feature_count = x.cols;
    model.features_per_split = f;
    model.trees.reserve(config.tree_count);
    model.tree_seeds.reserve(config.tree_count);

    const TreeGrowth growth{config.max_depth, config.min_samples_leaf, f == x.cols ? 0 : f};
    const std::size_t n = x.rows;

    for (std::size_t t = 0; t < config.tree_count; ++t) {
        const std::uint64_t tree_seed = derive_stream(seed, t);
        auto rng = make_rng(tree_seed);

        std::vector<std::size_t> rows(n);
        if (config.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& r : rows) r = pick(rng);
            std::set<std::size_t> in_bag(rows.begin(), rows.end());
            std::vector<std::size_t> oob;
            for (std::size_t r = 0; r < n; ++r) {
                if (!in_bag.contains(r)) oob.push_back(r);
            }
            model.oob_indices.push_back(std::move(oob));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
            model.oob_indices.emplace_back();
        }

        model.trees.push_back(grow_tree(x, y, rows, classes, growth, &rng));
        model.tree_seeds.push_back(tree_seed);
    }
    return model;
}

ForestModel fit_forest(const MetaDataset& meta, const ForestConfig& config, std::uint64_t seed) {
    return fit_forest(meta.features, meta.labels, meta.class_count, config, seed);
}

std::vector<double> forest_vote_fractions(const ForestModel& model, std::span<const double> row) {
    if (row.size() != model.feature_count) {
        throw ShapeError("expected " + std::to_string(model.feature_count) + " features, got " +
                         std::to_string(row.size()));
    }
    std::vector<double> votes(static_cast<std::size_t>(model.classes), 0.0);
    for (const auto& tree : model.trees) {
        votes[static_cast<std::size_t>(tree_predict(tree, row))] += 1.0;
    }
    for (double& v : votes) v /= static_cast<double>(model.trees.size());
    return votes;
}

int predict_forest(const ForestModel& model, std::span<const double> row) {
    const auto votes = forest_vote_fractions(model, row);
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<int> predict_forest(const ForestModel& model, const Matrix& rows) {
    std::vector<int> out;
    out.reserve(rows.rows);
    for (std::size_t r = 0; r < rows.rows; ++r) out.push_back(predict_forest(model, rows.row(r)));
    return out;
}

} // namespace blendids
