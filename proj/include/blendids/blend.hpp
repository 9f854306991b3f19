#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "blendids/base_model.hpp"
#include "blendids/dataset.hpp"
#include "blendids/forest.hpp"
#include "blendids/meta.hpp"

namespace blendids {

struct BlendConfig {
    double holdout_fraction = 0.2;    // slice of the training set the bases never see
    MetaMode meta_mode = MetaMode::Labels;
    bool concat_raw = false;          // append raw features to the meta rows
    NaiveBayesConfig naive_bayes;
    SvmConfig svm;
    TreeConfig tree;
    ForestConfig forest;
};

// The first level plus the forest: three base models fitted on one slice of
// the training data, the forest fitted on their outputs over the other.
struct BlendEnsemble {
    std::array<BaseModel, 3> bases;   // svm, naive bayes, decision tree
    ForestModel forest;
    MetaMode meta_mode = MetaMode::Labels;
    bool concat_raw = false;
    SplitPlan blend_split;            // recorded so holdout hygiene stays checkable
};

// Splits train (stratified, seeds derived from master_seed) into a base
// portion and a holdout, fits the three bases on the former, builds the meta
// dataset on the latter, fits the forest on it. Errors out if either portion
// loses a class.
BlendEnsemble blend_pipeline(const Dataset& train, const BlendConfig& config,
                             std::uint64_t master_seed);

// Meta row for one raw feature row (plus the raw values when concat_raw).
std::vector<double> blend_meta_row(const BlendEnsemble& ensemble, std::span<const double> x);

// Full route: base models -> meta row -> forest vote.
int blend_predict(const BlendEnsemble& ensemble, std::span<const double> x);

// Meta rows for a whole matrix of raw feature rows.
Matrix blend_meta_matrix(const BlendEnsemble& ensemble, const Matrix& x);

} // namespace blendids
