#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "blendids/base_model.hpp"
#include "blendids/dataset.hpp"
#include "blendids/matrix.hpp"

namespace blendids {

// labels: one column per base model carrying its predicted class id.
// scores: the three score vectors concatenated (3*C columns).
enum class MetaMode { Labels, Scores };

MetaMode meta_mode_from_string(const std::string& s);
std::string to_string(MetaMode mode);

// The derived second-level training set: base-classifier outputs as features,
// ground-truth labels carried through from the holdout rows.
struct MetaDataset {
    Matrix features;
    std::vector<int> labels;
    int class_count = 0;
    MetaMode mode = MetaMode::Labels;
    std::array<BaseKind, 3> source_kinds{};
};

std::vector<double> meta_row(const std::array<BaseModel, 3>& models,
                             std::span<const double> x, MetaMode mode);

MetaDataset build_meta(const std::array<BaseModel, 3>& models, const Dataset& holdout,
                       MetaMode mode);

} // namespace blendids
