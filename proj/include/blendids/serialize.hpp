#pragma once

#include <nlohmann/json_fwd.hpp>

#include "blendids/pipeline.hpp"

// JSON forms for every persisted model type. The encoding is self-describing
// versioned text: no binary blobs, so bundles stay reviewable and diffable.
// Doubles round-trip exactly (shortest-representation printing).
namespace blendids {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const TreeParams& tree);
TreeParams tree_from_json(const nlohmann::json& j);

nlohmann::json base_model_to_json(const BaseModel& model);
BaseModel base_model_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const nlohmann::json& j);

nlohmann::json net_to_json(const NetModel& net);
NetModel net_from_json(const nlohmann::json& j);

nlohmann::json split_plan_to_json(const SplitPlan& plan);
SplitPlan split_plan_from_json(const nlohmann::json& j);

nlohmann::json blend_to_json(const BlendEnsemble& ensemble);
BlendEnsemble blend_from_json(const nlohmann::json& j);

nlohmann::json final_choice_to_json(const FinalChoice& choice);
FinalChoice final_choice_from_json(const nlohmann::json& j);

} // namespace blendids
