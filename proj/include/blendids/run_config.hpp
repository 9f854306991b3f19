#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "blendids/blend.hpp"
#include "blendids/net.hpp"

namespace blendids {

struct DatasetConfig {
    std::string csv;
    std::string schema;       // path to a schema file
    std::string provenance;   // free-text tag carried into reports
};

struct PreprocessConfig {
    bool minmax = true;
    bool standard = true;
};

struct SplitConfig {
    std::pair<int, int> ratio{80, 20};
    bool stratified = true;
};

struct NetConfig {
    std::vector<std::size_t> hidden{16};
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    std::size_t patience = 0;
    std::string optimizer = "adam";           // adam | sgd
    double learning_rate = 0.001;             // adam alpha, or the sgd rate
    std::string output_mode = "softmax_xent"; // softmax_xent | sigmoid_mse
    bool on_raw_features = false;             // train on scaled raw features instead of meta rows
};

// Every knob of one training run. The master seed deterministically derives
// all stage seeds (see rng.hpp for the role table).
struct RunConfig {
    DatasetConfig dataset;
    PreprocessConfig preprocess;
    SplitConfig split;
    std::size_t folds = 5;
    BlendConfig blend;
    NetConfig net;
    double gate_confidence = 0.9;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    void validate() const;   // throws ConfigError
};

std::pair<int, int> parse_ratio(const std::string& s);
std::string format_ratio(std::pair<int, int> ratio);

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace blendids
