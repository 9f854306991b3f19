#include "blendids/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "blendids/errors.hpp"
#include "blendids/rng.hpp"

namespace blendids {

FeatureSchema synth_schema(std::size_t features) {
    FeatureSchema schema;
    schema.name = "synth_" + std::to_string(features);
    for (std::size_t j = 0; j < features; ++j) {
        schema.columns.push_back({"f" + std::to_string(j + 1), ColumnKind::Numeric});
    }
    schema.columns.push_back({"Target", ColumnKind::Label});
    schema.label_encoding = {{"0", 0}, {"1", 1}};
    return schema;
}

Dataset make_synthetic(const SynthConfig& config) {
    if (config.rows < 2) throw ConfigError("synthetic dataset needs at least 2 rows");
    if (config.features == 0) throw ConfigError("synthetic dataset needs at least 1 feature");
    if (!(config.attack_fraction > 0.0 && config.attack_fraction < 1.0)) {
        throw ConfigError("attack fraction must lie strictly between 0 and 1");
    }
    if (config.label_noise < 0.0 || config.label_noise >= 1.0) {
        throw ConfigError("label noise must lie in [0, 1)");
    }

    const std::size_t n1 = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(config.rows) *
                                                config.attack_fraction)));
    const std::size_t n0 = config.rows - n1;

    auto rng = make_rng(derive_seed(config.seed, SeedRole::Synth));
    std::normal_distribution<double> noise(0.0, config.stddev);

    Dataset d;
    d.schema = synth_schema(config.features);
    d.class_count = 2;
    d.provenance = "synthetic";
    d.features = Matrix(config.rows, config.features);
    d.labels.resize(config.rows);

    std::vector<int> labels(config.rows);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n0), 0);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(n0), labels.end(), 1);
    std::shuffle(labels.begin(), labels.end(), rng);

    for (std::size_t r = 0; r < config.rows; ++r) {
        const double center = labels[r] == 0 ? -config.mean_offset : config.mean_offset;
        for (std::size_t j = 0; j < config.features; ++j) {
            d.features.at(r, j) = center + noise(rng);
        }
        d.labels[r] = labels[r];
    }

    if (config.label_noise > 0.0) {
        std::vector<std::size_t> order(config.rows);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t flips = static_cast<std::size_t>(
            std::floor(static_cast<double>(config.rows) * config.label_noise + 1e-9));
        for (std::size_t i = 0; i < flips; ++i) {
            int& label = d.labels[order[i]];
            label = 1 - label;
        }
    }
    return d;
}

} // namespace blendids
