#pragma once

#include <optional>
#include <vector>

#include "blendids/blend.hpp"
#include "blendids/dataset.hpp"
#include "blendids/metrics.hpp"
#include "blendids/net.hpp"
#include "blendids/run_config.hpp"
#include "blendids/selection.hpp"

namespace blendids {

// Everything needed to route a new sample end to end: scalers, the three base
// models, forest, ANN and the selection outcome. This is what a bundle file
// persists.
struct TrainedPipeline {
    FeatureSchema schema;
    CategoricalDicts categorical_encodings;
    std::optional<MinMaxScaler> minmax;
    std::optional<StandardScaler> standard;
    BlendEnsemble blend;
    NetModel net;
    bool ann_on_raw = false;
    FinalChoice final;
    RunConfig config;

    // A few held-out rows and their predictions, replayed after every load.
    Matrix selfcheck_rows;
    std::vector<int> selfcheck_predictions;
};

struct PipelinePrediction {
    int label = 0;          // the chosen branch's answer
    int forest_label = 0;
    int ann_label = 0;
    std::vector<double> forest_votes;
    std::vector<double> ann_probabilities;
};

struct TrainOutcome {
    TrainedPipeline pipeline;
    std::vector<EvaluationReport> reports;   // nb, svm, dt, forest, ann, final
    Dataset test_slice;                      // cleaned pre-scaling rows for evaluation replay
};

// Reports for all six models (nb, svm, dt, forest, ann, final:<branch>)
// against an already-scaled labeled dataset.
std::vector<EvaluationReport> report_all_models(const BlendEnsemble& blend, const NetModel& net,
                                                bool ann_on_raw, FinalKind chosen,
                                                const Dataset& validation,
                                                const std::string& dataset_tag,
                                                const std::string& split_tag, std::uint64_t seed);

// Fits the two levels on `train`, selects on `validation`, and reports all six
// models against it. Raw inputs must already be scaled.
struct FitResult {
    BlendEnsemble blend;
    NetModel net;
    FinalChoice final;
    std::vector<EvaluationReport> reports;
};
FitResult fit_and_evaluate(const Dataset& train, const Dataset& validation,
                           const RunConfig& config, std::uint64_t master_seed,
                           const std::string& split_tag);

// The whole training command: clean, scale, outer split, fit, select, report.
// `loaded` is a dataset fresh from load_csv.
TrainOutcome run_training(const Dataset& loaded, const RunConfig& config);

std::vector<double> scale_row(const TrainedPipeline& pipeline, std::span<const double> raw);
PipelinePrediction pipeline_predict_scaled(const TrainedPipeline& pipeline,
                                           std::span<const double> scaled);
PipelinePrediction pipeline_predict_raw(const TrainedPipeline& pipeline,
                                        std::span<const double> raw);

} // namespace blendids
