#include "blendids/meta.hpp"

#include <algorithm>

#include "blendids/errors.hpp"

namespace blendids {

MetaMode meta_mode_from_string(const std::string& s) {
    if (s == "labels") return MetaMode::Labels;
    if (s == "scores") return MetaMode::Scores;
    throw ConfigError("unknown meta-feature mode '" + s + "' (expected labels or scores)");
}

std::string to_string(MetaMode mode) {
    return mode == MetaMode::Labels ? "labels" : "scores";
}

std::vector<double> meta_row(const std::array<BaseModel, 3>& models,
                             std::span<const double> x, MetaMode mode) {
    std::vector<double> row;
    if (mode == MetaMode::Labels) {
        row.reserve(models.size());
        for (const auto& m : models) row.push_back(static_cast<double>(predict_one(m, x)));
    } else {
        row.reserve(models.size() * static_cast<std::size_t>(models[0].classes));
        for (const auto& m : models) {
            const auto scores = predict_scores_one(m, x);
            row.insert(row.end(), scores.begin(), scores.end());
        }
    }
    return row;
}

MetaDataset build_meta(const std::array<BaseModel, 3>& models, const Dataset& holdout,
                       MetaMode mode) {
    if (holdout.size() == 0) throw DataError("meta dataset needs a non-empty holdout");

    MetaDataset meta;
    meta.mode = mode;
    meta.class_count = holdout.class_count;
    for (std::size_t i = 0; i < models.size(); ++i) meta.source_kinds[i] = models[i].kind;

    const std::size_t width = mode == MetaMode::Labels
                                  ? models.size()
                                  : models.size() * static_cast<std::size_t>(models[0].classes);
    meta.features = Matrix(holdout.size(), width);
    for (std::size_t r = 0; r < holdout.size(); ++r) {
        const auto row = meta_row(models, holdout.features.row(r), mode);
        std::copy(row.begin(), row.end(), meta.features.row(r).begin());
    }
    meta.labels = holdout.labels;
    return meta;
}

} // namespace blendids
