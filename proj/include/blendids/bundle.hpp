#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "blendids/pipeline.hpp"

namespace blendids {

// FNV-1a, for bundle content integrity (not a cryptographic hash).
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// The digest field covers the compact dump of the whole document with the
// digest itself blanked.
nlohmann::json bundle_to_json(const TrainedPipeline& pipeline);
TrainedPipeline bundle_from_json(const nlohmann::json& j);

void save_bundle(const TrainedPipeline& pipeline, const std::filesystem::path& path);

// Verifies the digest and replays the stored self-check rows; either mismatch
// is a DataError.
TrainedPipeline load_bundle(const std::filesystem::path& path);

} // namespace blendids
