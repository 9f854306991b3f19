#include "blendids/blend.hpp"

#include <algorithm>

#include "blendids/errors.hpp"
#include "blendids/rng.hpp"

namespace blendids {

namespace {

void require_all_classes(const Dataset& d, const char* portion) {
    std::vector<bool> present(static_cast<std::size_t>(d.class_count), false);
    for (int label : d.labels) present[static_cast<std::size_t>(label)] = true;
    for (std::size_t k = 0; k < present.size(); ++k) {
        if (!present[k]) {
            throw TrainError("blend split left class " + std::to_string(k) + " out of the " +
                             portion + " portion; provide more data or adjust the ratio");
        }
    }
}

} // namespace

BlendEnsemble blend_pipeline(const Dataset& train, const BlendConfig& config,
                             std::uint64_t master_seed) {
    if (!(config.holdout_fraction > 0.0 && config.holdout_fraction < 1.0)) {
        throw ConfigError("blend holdout fraction must lie strictly between 0 and 1");
    }

    BlendEnsemble ensemble;
    ensemble.meta_mode = config.meta_mode;
    ensemble.concat_raw = config.concat_raw;
    ensemble.blend_split = split_fraction(train, 1.0 - config.holdout_fraction,
                                          derive_seed(master_seed, SeedRole::BlendSplit),
                                          /*stratified=*/true);

    const Dataset base_portion = take_rows(train, ensemble.blend_split.train_indices);
    const Dataset holdout = take_rows(train, ensemble.blend_split.test_indices);
    require_all_classes(base_portion, "base");
    require_all_classes(holdout, "holdout");

    ensemble.bases[0] = fit_svm(base_portion, config.svm, derive_seed(master_seed, SeedRole::Svm));
    ensemble.bases[1] = fit_naive_bayes(base_portion, config.naive_bayes);
    ensemble.bases[2] = fit_tree(base_portion, config.tree);

    MetaDataset meta = build_meta(ensemble.bases, holdout, config.meta_mode);
    if (config.concat_raw) {
        Matrix widened(meta.features.rows, meta.features.cols + holdout.feature_count());
        for (std::size_t r = 0; r < meta.features.rows; ++r) {
            auto dst = widened.row(r);
            const auto meta_part = meta.features.row(r);
            const auto raw_part = holdout.features.row(r);
            std::copy(meta_part.begin(), meta_part.end(), dst.begin());
            std::copy(raw_part.begin(), raw_part.end(),
                      dst.begin() + static_cast<std::ptrdiff_t>(meta_part.size()));
        }
        meta.features = std::move(widened);
    }

    ensemble.forest = fit_forest(meta.features, meta.labels, meta.class_count, config.forest,
                                 derive_seed(master_seed, SeedRole::Forest));
    return ensemble;
}

std::vector<double> blend_meta_row(const BlendEnsemble& ensemble, std::span<const double> x) {
    std::vector<double> row = meta_row(ensemble.bases, x, ensemble.meta_mode);
    if (ensemble.concat_raw) row.insert(row.end(), x.begin(), x.end());
    return row;
}

Matrix blend_meta_matrix(const BlendEnsemble& ensemble, const Matrix& x) {
    Matrix out;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = blend_meta_row(ensemble, x.row(r));
        if (r == 0) out = Matrix(x.rows, row.size());
        std::copy(row.begin(), row.end(), out.row(r).begin());
    }
    return out;
}

int blend_predict(const BlendEnsemble& ensemble, std::span<const double> x) {
    return predict_forest(ensemble.forest, blend_meta_row(ensemble, x));
}

} // namespace blendids
