#include "blendids/bundle.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "blendids/errors.hpp"
#include "blendids/serialize.hpp"

namespace blendids {

namespace {

constexpr int kBundleVersion = 1;

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

nlohmann::json bundle_to_json(const TrainedPipeline& pipeline) {
    nlohmann::json j;
    j["format"] = "blendids-bundle";
    j["version"] = kBundleVersion;
    j["digest"] = "";
    j["schema"] = schema_to_json(pipeline.schema);
    j["categorical_encodings"] = pipeline.categorical_encodings;
    if (pipeline.minmax) {
        nlohmann::json mins = nlohmann::json::array(), maxs = nlohmann::json::array();
        for (const auto& r : pipeline.minmax->ranges) {
            mins.push_back(r.min);
            maxs.push_back(r.max);
        }
        j["scalers"]["minmax"] = {{"min", mins}, {"max", maxs}};
    } else {
        j["scalers"]["minmax"] = nullptr;
    }
    if (pipeline.standard) {
        nlohmann::json means = nlohmann::json::array(), stddevs = nlohmann::json::array();
        for (const auto& m : pipeline.standard->moments) {
            means.push_back(m.mean);
            stddevs.push_back(m.stddev);
        }
        j["scalers"]["standard"] = {{"mean", means}, {"stddev", stddevs}};
    } else {
        j["scalers"]["standard"] = nullptr;
    }
    j["blend"] = blend_to_json(pipeline.blend);
    j["net"] = net_to_json(pipeline.net);
    j["ann_on_raw"] = pipeline.ann_on_raw;
    j["final"] = final_choice_to_json(pipeline.final);
    j["config"] = run_config_to_json(pipeline.config);
    j["selfcheck"] = {{"rows", matrix_to_json(pipeline.selfcheck_rows)},
                      {"predictions", pipeline.selfcheck_predictions}};
    j["digest"] = fnv1a64_hex(j.dump());
    return j;
}

TrainedPipeline bundle_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "blendids-bundle") {
            throw DataError("not a blendids bundle file");
        }
        if (j.at("version").get<int>() != kBundleVersion) {
            throw DataError("unsupported bundle version " + j.at("version").dump());
        }

        TrainedPipeline pipeline;
        pipeline.schema = schema_from_json(j.at("schema"));
        pipeline.categorical_encodings = j.at("categorical_encodings").get<CategoricalDicts>();

        const auto& scalers = j.at("scalers");
        if (!scalers.at("minmax").is_null()) {
            MinMaxScaler scaler;
            const auto mins = scalers.at("minmax").at("min").get<std::vector<double>>();
            const auto maxs = scalers.at("minmax").at("max").get<std::vector<double>>();
            for (std::size_t i = 0; i < mins.size(); ++i) {
                scaler.ranges.push_back({mins[i], maxs[i]});
            }
            pipeline.minmax = std::move(scaler);
        }
        if (!scalers.at("standard").is_null()) {
            StandardScaler scaler;
            const auto means = scalers.at("standard").at("mean").get<std::vector<double>>();
            const auto stddevs = scalers.at("standard").at("stddev").get<std::vector<double>>();
            for (std::size_t i = 0; i < means.size(); ++i) {
                scaler.moments.push_back({means[i], stddevs[i]});
            }
            pipeline.standard = std::move(scaler);
        }

        pipeline.blend = blend_from_json(j.at("blend"));
        pipeline.net = net_from_json(j.at("net"));
        pipeline.ann_on_raw = j.at("ann_on_raw").get<bool>();
        pipeline.final = final_choice_from_json(j.at("final"));
        pipeline.config = run_config_from_json(j.at("config"));
        pipeline.selfcheck_rows = matrix_from_json(j.at("selfcheck").at("rows"));
        pipeline.selfcheck_predictions =
            j.at("selfcheck").at("predictions").get<std::vector<int>>();
        return pipeline;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed bundle: ") + e.what());
    }
}

void save_bundle(const TrainedPipeline& pipeline, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write bundle " + path.string());
    out << bundle_to_json(pipeline).dump(2) << '\n';
}

TrainedPipeline load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open bundle " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bundle " + path.string() + " is not valid JSON: " + e.what());
    }

    const std::string stored = j.value("digest", "");
    j["digest"] = "";
    if (fnv1a64_hex(j.dump()) != stored) {
        throw DataError("bundle " + path.string() + " failed its digest check");
    }

    TrainedPipeline pipeline = bundle_from_json(j);

    // Replay the frozen rows: a loaded bundle must predict exactly as the
    // training process did.
    for (std::size_t r = 0; r < pipeline.selfcheck_rows.rows; ++r) {
        const int got = pipeline_predict_scaled(pipeline, pipeline.selfcheck_rows.row(r)).label;
        if (got != pipeline.selfcheck_predictions[r]) {
            throw DataError("bundle " + path.string() + " failed its prediction self-check");
        }
    }
    return pipeline;
}

} // namespace blendids
