#pragma once

#include <cstdint>

#include "blendids/dataset.hpp"

namespace blendids {

// Two Gaussian blobs at +/- mean_offset per dimension, class 1 holding
// attack_fraction of the rows (the default mirrors the heavy normal/attack
// imbalance of real flow captures). label_noise flips that share of labels
// after generation.
struct SynthConfig {
    std::size_t rows = 2000;
    std::size_t features = 6;
    double attack_fraction = 0.06;
    double mean_offset = 2.0;
    double stddev = 1.0;
    double label_noise = 0.0;
    std::uint64_t seed = 1;
};

Dataset make_synthetic(const SynthConfig& config);

FeatureSchema synth_schema(std::size_t features);

} // namespace blendids
