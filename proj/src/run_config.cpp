#include "blendids/run_config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "blendids/errors.hpp"

namespace blendids {

std::pair<int, int> parse_ratio(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos || s.find(':', colon + 1) != std::string::npos) {
        throw ConfigError("split ratio must look like '80:20', got '" + s + "'");
    }
    try {
        const int train = std::stoi(s.substr(0, colon));
        const int test = std::stoi(s.substr(colon + 1));
        if (train <= 0 || test <= 0 || train + test != 100) {
            throw ConfigError("split ratio percentages must be positive and sum to 100, got '" +
                              s + "'");
        }
        return {train, test};
    } catch (const std::invalid_argument&) {
        throw ConfigError("split ratio must be numeric, got '" + s + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("split ratio out of range: '" + s + "'");
    }
}

std::string format_ratio(std::pair<int, int> ratio) {
    return std::to_string(ratio.first) + ":" + std::to_string(ratio.second);
}

void RunConfig::validate() const {
    if (dataset.csv.empty()) throw ConfigError("dataset.csv is required");
    if (dataset.schema.empty()) throw ConfigError("dataset.schema is required");
    if (split.ratio.first <= 0 || split.ratio.second <= 0 ||
        split.ratio.first + split.ratio.second != 100) {
        throw ConfigError("split ratio percentages must be positive and sum to 100");
    }
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (!(blend.holdout_fraction > 0.0 && blend.holdout_fraction < 1.0)) {
        throw ConfigError("blend.holdout_fraction must lie strictly between 0 and 1");
    }
    if (blend.naive_bayes.variance_floor <= 0.0) {
        throw ConfigError("naive_bayes.variance_floor must be positive");
    }
    if (blend.svm.lambda <= 0.0) throw ConfigError("svm.lambda must be positive");
    if (blend.svm.epochs == 0) throw ConfigError("svm.epochs must be >= 1");
    if (blend.tree.min_samples_leaf == 0) throw ConfigError("tree.min_samples_leaf must be >= 1");
    if (blend.forest.tree_count == 0) throw ConfigError("forest.trees must be >= 1");
    if (blend.forest.min_samples_leaf == 0) {
        throw ConfigError("forest.min_samples_leaf must be >= 1");
    }
    if (net.hidden.empty()) throw ConfigError("net.hidden needs at least one hidden layer");
    for (std::size_t h : net.hidden) {
        if (h == 0) throw ConfigError("net.hidden sizes must be positive");
    }
    if (net.epochs == 0 || net.batch_size == 0) {
        throw ConfigError("net.epochs and net.batch_size must be >= 1");
    }
    if (net.optimizer != "adam" && net.optimizer != "sgd") {
        throw ConfigError("net.optimizer must be 'adam' or 'sgd'");
    }
    if (net.learning_rate <= 0.0) throw ConfigError("net.learning_rate must be positive");
    (void)output_mode_from_string(net.output_mode);
    if (!(gate_confidence > 0.0 && gate_confidence <= 1.0)) {
        throw ConfigError("gate_confidence must lie in (0, 1]");
    }
    if (out_dir.empty()) throw ConfigError("out_dir is required");
}

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig config;
    try {
        if (j.contains("dataset")) {
            const auto& d = j.at("dataset");
            read_if(d, "csv", config.dataset.csv);
            read_if(d, "schema", config.dataset.schema);
            read_if(d, "provenance", config.dataset.provenance);
        }
        if (j.contains("preprocess")) {
            const auto& p = j.at("preprocess");
            read_if(p, "minmax", config.preprocess.minmax);
            read_if(p, "standard", config.preprocess.standard);
        }
        if (j.contains("split")) {
            const auto& s = j.at("split");
            if (s.contains("ratio")) config.split.ratio = parse_ratio(s.at("ratio"));
            read_if(s, "stratified", config.split.stratified);
        }
        read_if(j, "folds", config.folds);
        if (j.contains("blend")) {
            const auto& b = j.at("blend");
            read_if(b, "holdout_fraction", config.blend.holdout_fraction);
            if (b.contains("meta_mode")) {
                config.blend.meta_mode = meta_mode_from_string(b.at("meta_mode"));
            }
            read_if(b, "concat_raw", config.blend.concat_raw);
        }
        if (j.contains("naive_bayes")) {
            read_if(j.at("naive_bayes"), "variance_floor",
                    config.blend.naive_bayes.variance_floor);
        }
        if (j.contains("svm")) {
            const auto& s = j.at("svm");
            read_if(s, "lambda", config.blend.svm.lambda);
            read_if(s, "epochs", config.blend.svm.epochs);
        }
        if (j.contains("tree")) {
            const auto& t = j.at("tree");
            read_if(t, "max_depth", config.blend.tree.max_depth);
            read_if(t, "min_samples_leaf", config.blend.tree.min_samples_leaf);
        }
        if (j.contains("forest")) {
            const auto& f = j.at("forest");
            read_if(f, "trees", config.blend.forest.tree_count);
            read_if(f, "features_per_split", config.blend.forest.features_per_split);
            read_if(f, "max_depth", config.blend.forest.max_depth);
            read_if(f, "min_samples_leaf", config.blend.forest.min_samples_leaf);
            read_if(f, "bootstrap", config.blend.forest.bootstrap);
        }
        if (j.contains("net")) {
            const auto& n = j.at("net");
            read_if(n, "hidden", config.net.hidden);
            read_if(n, "epochs", config.net.epochs);
            read_if(n, "batch_size", config.net.batch_size);
            read_if(n, "patience", config.net.patience);
            read_if(n, "optimizer", config.net.optimizer);
            read_if(n, "learning_rate", config.net.learning_rate);
            read_if(n, "output_mode", config.net.output_mode);
            read_if(n, "on_raw_features", config.net.on_raw_features);
        }
        read_if(j, "gate_confidence", config.gate_confidence);
        read_if(j, "seed", config.seed);
        read_if(j, "out_dir", config.out_dir);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    config.validate();
    return config;
}

nlohmann::json run_config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["dataset"] = {{"csv", config.dataset.csv},
                    {"schema", config.dataset.schema},
                    {"provenance", config.dataset.provenance}};
    j["preprocess"] = {{"minmax", config.preprocess.minmax},
                       {"standard", config.preprocess.standard}};
    j["split"] = {{"ratio", format_ratio(config.split.ratio)},
                  {"stratified", config.split.stratified}};
    j["folds"] = config.folds;
    j["blend"] = {{"holdout_fraction", config.blend.holdout_fraction},
                  {"meta_mode", to_string(config.blend.meta_mode)},
                  {"concat_raw", config.blend.concat_raw}};
    j["naive_bayes"] = {{"variance_floor", config.blend.naive_bayes.variance_floor}};
    j["svm"] = {{"lambda", config.blend.svm.lambda}, {"epochs", config.blend.svm.epochs}};
    j["tree"] = {{"max_depth", config.blend.tree.max_depth},
                 {"min_samples_leaf", config.blend.tree.min_samples_leaf}};
    j["forest"] = {{"trees", config.blend.forest.tree_count},
                   {"features_per_split", config.blend.forest.features_per_split},
                   {"max_depth", config.blend.forest.max_depth},
                   {"min_samples_leaf", config.blend.forest.min_samples_leaf},
                   {"bootstrap", config.blend.forest.bootstrap}};
    j["net"] = {{"hidden", config.net.hidden},
                {"epochs", config.net.epochs},
                {"batch_size", config.net.batch_size},
                {"patience", config.net.patience},
                {"optimizer", config.net.optimizer},
                {"learning_rate", config.net.learning_rate},
                {"output_mode", config.net.output_mode},
                {"on_raw_features", config.net.on_raw_features}};
    j["gate_confidence"] = config.gate_confidence;
    j["seed"] = config.seed;
    j["out_dir"] = config.out_dir;
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

} // namespace blendids
