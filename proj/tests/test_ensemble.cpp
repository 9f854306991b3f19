#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "blendids/blend.hpp"
#include "blendids/errors.hpp"
#include "blendids/forest.hpp"
#include "blendids/meta.hpp"
#include "blendids/synth.hpp"
#include "blendids/tree.hpp"

#include "testutil.hpp"

using namespace blendids;
using testutil::make_dataset;

namespace {

Dataset blobs(std::size_t n, std::size_t d, double offset, std::uint64_t seed,
              double class1_share = 0.5) {
    SynthConfig config;
    config.rows = n;
    config.features = d;
    config.mean_offset = offset;
    config.attack_fraction = class1_share;
    config.seed = seed;
    return make_synthetic(config);
}

std::array<BaseModel, 3> fit_bases(const Dataset& train, std::uint64_t seed) {
    return {fit_svm(train, {}, seed), fit_naive_bayes(train), fit_tree(train)};
}

// A one-leaf tree that always votes `cls`; lets vote-rule tests skip fitting.
TreeParams constant_tree(int cls, int classes) {
    TreeParams t;
    TreeNode leaf;
    leaf.counts.assign(static_cast<std::size_t>(classes), 0.0);
    leaf.counts[static_cast<std::size_t>(cls)] = 1.0;
    t.nodes.push_back(std::move(leaf));
    return t;
}

ForestModel constant_forest(const std::vector<int>& votes, int classes, std::size_t width) {
    ForestModel f;
    f.classes = classes;
    f.feature_count = width;
    f.features_per_split = 1;
    for (int v : votes) {
        f.trees.push_back(constant_tree(v, classes));
        f.tree_seeds.push_back(0);
        f.oob_indices.emplace_back();
    }
    return f;
}

} // namespace

// ---- meta dataset -------------------------------------------------------------

TEST_CASE("meta dataset shapes follow the mode") {
    const Dataset train = blobs(400, 4, 2.0, 1);
    const Dataset holdout = blobs(100, 4, 2.0, 2);
    const auto models = fit_bases(train, 7);

    const MetaDataset labels_meta = build_meta(models, holdout, MetaMode::Labels);
    CHECK(labels_meta.features.rows == 100);
    CHECK(labels_meta.features.cols == 3);
    CHECK(labels_meta.labels == holdout.labels);

    const MetaDataset scores_meta = build_meta(models, holdout, MetaMode::Scores);
    CHECK(scores_meta.features.rows == 100);
    CHECK(scores_meta.features.cols == 6);   // 3 models x 2 classes
}

TEST_CASE("meta rows are the base predictions in labels mode") {
    const Dataset train = blobs(400, 4, 3.0, 3);
    const auto models = fit_bases(train, 7);

    // deep inside class 1 every base model should agree
    const std::vector<double> attack_row(4, 3.0);
    const auto row = meta_row(models, attack_row, MetaMode::Labels);
    CHECK(row == std::vector<double>{1.0, 1.0, 1.0});
    for (std::size_t i = 0; i < models.size(); ++i) {
        CHECK(row[i] == double(predict_one(models[i], attack_row)));
    }
}

TEST_CASE("build_meta refuses an empty holdout") {
    const Dataset train = blobs(200, 4, 2.0, 4);
    const auto models = fit_bases(train, 7);
    const Dataset empty = make_dataset({}, {});
    CHECK_THROWS_AS(build_meta(models, empty, MetaMode::Labels), DataError);
}

// ---- forest --------------------------------------------------------------------

TEST_CASE("a bootstrap-free single tree forest predicts like plain CART") {
    const Dataset d = blobs(300, 5, 1.0, 5);
    ForestConfig config;
    config.tree_count = 1;
    config.features_per_split = 5;   // all
    config.bootstrap = false;
    const ForestModel forest = fit_forest(d.features, d.labels, 2, config, 11);
    const BaseModel cart = fit_tree(d, {config.max_depth, config.min_samples_leaf});

    const Dataset probe = blobs(200, 5, 1.0, 6);
    CHECK(predict_forest(forest, probe.features) == predict(cart, probe.features));
}

TEST_CASE("a 101-tree forest nails separable data") {
    const Dataset d = blobs(400, 3, 3.0, 7);
    ForestConfig config;
    config.tree_count = 101;
    const ForestModel forest = fit_forest(d.features, d.labels, 2, config, 13);
    const auto pred = predict_forest(forest, d.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == d.labels[i] ? 1 : 0;
    CHECK(hits == d.size());
}

TEST_CASE("forest training is deterministic under the seed") {
    const Dataset d = blobs(200, 4, 1.0, 8);
    ForestConfig config;
    config.tree_count = 9;
    const ForestModel a = fit_forest(d.features, d.labels, 2, config, 21);
    const ForestModel b = fit_forest(d.features, d.labels, 2, config, 21);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
        for (std::size_t i = 0; i < a.trees[t].nodes.size(); ++i) {
            CHECK(a.trees[t].nodes[i].feature == b.trees[t].nodes[i].feature);
            CHECK(a.trees[t].nodes[i].threshold == b.trees[t].nodes[i].threshold);
            CHECK(a.trees[t].nodes[i].counts == b.trees[t].nodes[i].counts);
        }
    }
    CHECK(a.oob_indices == b.oob_indices);
}

TEST_CASE("forest votes match brute-force enumeration at small tree counts") {
    std::mt19937_64 rng(9);
    for (std::size_t trees : {1UL, 2UL, 3UL, 5UL, 7UL}) {
        const Dataset d = blobs(120, 3, 0.8, rng());
        ForestConfig config;
        config.tree_count = trees;
        const ForestModel forest = fit_forest(d.features, d.labels, 2, config, rng());

        const Dataset probe = blobs(100, 3, 0.8, rng());
        for (std::size_t r = 0; r < probe.size(); ++r) {
            const auto row = probe.features.row(r);
            std::vector<std::size_t> votes(2, 0);
            for (const auto& tree : forest.trees) {
                ++votes[static_cast<std::size_t>(tree_predict(tree, row))];
            }
            const int expected = votes[1] > votes[0] ? 1 : 0;   // ties to the lowest id
            CHECK(predict_forest(forest, row) == expected);
        }
    }
}

TEST_CASE("vote tallies follow majority and tie rules") {
    // 51 vs 50 over 101 trees
    std::vector<int> votes(101, 1);
    for (int i = 0; i < 51; ++i) votes[static_cast<std::size_t>(i)] = 0;
    CHECK(predict_forest(constant_forest(votes, 2, 1), std::vector<double>{0.0}) == 0);

    // 50:50 over an even forest goes to class 0
    votes.assign(100, 1);
    for (int i = 0; i < 50; ++i) votes[static_cast<std::size_t>(i)] = 0;
    CHECK(predict_forest(constant_forest(votes, 2, 1), std::vector<double>{0.0}) == 0);

    // (1, 1, 0) -> 1
    CHECK(predict_forest(constant_forest({1, 1, 0}, 2, 1), std::vector<double>{0.0}) == 1);

    // vote fractions sum to one
    const auto fractions =
        forest_vote_fractions(constant_forest({1, 1, 0}, 2, 1), std::vector<double>{0.0});
    CHECK(fractions == std::vector<double>{1.0 / 3.0, 2.0 / 3.0});
}

TEST_CASE("forest rejects mismatched rows") {
    const ForestModel f = constant_forest({0}, 2, 3);
    CHECK_THROWS_AS(predict_forest(f, std::vector<double>{1.0}), ShapeError);
}

// ---- blend pipeline -------------------------------------------------------------

TEST_CASE("blend pipeline separates the two-Gaussian benchmark") {
    const Dataset all = blobs(2000, 6, 2.0, 12);
    const SplitPlan outer = split(all, {80, 20}, 31);
    const Dataset train = take_rows(all, outer.train_indices);
    const Dataset test = take_rows(all, outer.test_indices);

    const BlendEnsemble ensemble = blend_pipeline(train, {}, 77);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < test.size(); ++r) {
        hits += blend_predict(ensemble, test.features.row(r)) == test.labels[r] ? 1 : 0;
    }
    CHECK(double(hits) / double(test.size()) >= 0.98);
}

TEST_CASE("blend holdout and base portions never overlap") {
    const Dataset train = blobs(400, 4, 2.0, 13);
    const BlendEnsemble ensemble = blend_pipeline(train, {}, 5);
    std::set<std::size_t> base(ensemble.blend_split.train_indices.begin(),
                               ensemble.blend_split.train_indices.end());
    for (std::size_t i : ensemble.blend_split.test_indices) CHECK_FALSE(base.contains(i));
    CHECK(base.size() + ensemble.blend_split.test_indices.size() == train.size());
}

TEST_CASE("a 0.5 blend ratio on ten rows gives five and five") {
    const Dataset train = blobs(10, 2, 3.0, 14);
    BlendConfig config;
    config.holdout_fraction = 0.5;
    config.svm.epochs = 5;
    const BlendEnsemble ensemble = blend_pipeline(train, config, 3);
    CHECK(ensemble.blend_split.train_indices.size() == 5);
    CHECK(ensemble.blend_split.test_indices.size() == 5);
}

TEST_CASE("single-sample inference returns exactly one in-range class id") {
    const Dataset train = blobs(300, 4, 2.0, 15);
    const BlendEnsemble ensemble = blend_pipeline(train, {}, 5);
    const int label = blend_predict(ensemble, train.features.row(0));
    CHECK(label >= 0);
    CHECK(label < 2);
}

TEST_CASE("blending errors out when a class cannot reach both portions") {
    // only one attack row: the stratified blend split cannot give both sides one
    const Dataset skewed = make_dataset({{0}, {1}, {2}, {3}, {4}, {5}},
                                        {0, 0, 0, 0, 0, 1});
    CHECK_THROWS_AS(blend_pipeline(skewed, {}, 1), Error);
}

TEST_CASE("scores mode and raw concatenation widen the forest input") {
    const Dataset train = blobs(400, 4, 2.0, 16);
    BlendConfig config;
    config.meta_mode = MetaMode::Scores;
    config.concat_raw = true;
    const BlendEnsemble ensemble = blend_pipeline(train, config, 5);
    CHECK(ensemble.forest.feature_count == 3 * 2 + 4);
    const int label = blend_predict(ensemble, train.features.row(1));
    CHECK((label == 0 || label == 1));
}

TEST_CASE("blend pipelines are reproducible seed for seed") {
    const Dataset train = blobs(300, 4, 2.0, 17);
    const BlendEnsemble a = blend_pipeline(train, {}, 41);
    const BlendEnsemble b = blend_pipeline(train, {}, 41);
    CHECK(a.blend_split.train_indices == b.blend_split.train_indices);
    const auto& sa = std::get<SvmParams>(a.bases[0].params).machines[0];
    const auto& sb = std::get<SvmParams>(b.bases[0].params).machines[0];
    CHECK(sa.weights == sb.weights);
    REQUIRE(a.forest.trees.size() == b.forest.trees.size());
    for (std::size_t t = 0; t < a.forest.trees.size(); ++t) {
        CHECK(a.forest.trees[t].nodes.size() == b.forest.trees[t].nodes.size());
    }
}

TEST_CASE("across seeds the forest is no worse than a single tree on noisy meta data") {
    double forest_mean = 0.0, tree_mean = 0.0;
    const int seeds = 10;
    for (int s = 1; s <= seeds; ++s) {
        SynthConfig config;
        config.rows = 1200;
        config.features = 6;
        config.attack_fraction = 0.5;
        config.label_noise = 0.10;
        config.seed = static_cast<std::uint64_t>(s);
        const Dataset all = make_synthetic(config);
        const SplitPlan outer = split(all, {70, 30}, static_cast<std::uint64_t>(s));
        const Dataset train = take_rows(all, outer.train_indices);
        const Dataset test = take_rows(all, outer.test_indices);

        BlendConfig blend_config;
        blend_config.meta_mode = MetaMode::Scores;
        const BlendEnsemble ensemble =
            blend_pipeline(train, blend_config, static_cast<std::uint64_t>(s));

        // single CART on the same meta rows the forest trained on
        const Dataset holdout = take_rows(train, ensemble.blend_split.test_indices);
        const MetaDataset meta = build_meta(ensemble.bases, holdout, MetaMode::Scores);
        std::vector<std::size_t> rows(meta.features.rows);
        std::iota(rows.begin(), rows.end(), 0);
        const TreeParams single =
            grow_tree(meta.features, meta.labels, rows, 2, {12, 2, 0}, nullptr);

        std::size_t forest_hits = 0, tree_hits = 0;
        for (std::size_t r = 0; r < test.size(); ++r) {
            const auto meta_test = blend_meta_row(ensemble, test.features.row(r));
            forest_hits += predict_forest(ensemble.forest, meta_test) == test.labels[r] ? 1 : 0;
            tree_hits += tree_predict(single, meta_test) == test.labels[r] ? 1 : 0;
        }
        forest_mean += double(forest_hits) / double(test.size());
        tree_mean += double(tree_hits) / double(test.size());
    }
    forest_mean /= seeds;
    tree_mean /= seeds;
    CHECK(forest_mean >= tree_mean);
}
