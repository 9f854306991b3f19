#include "blendids/selection.hpp"

#include <algorithm>

#include "blendids/errors.hpp"

namespace blendids {

std::string to_string(FinalKind kind) {
    return kind == FinalKind::Forest ? "forest" : "ann";
}

FinalKind final_kind_from_string(const std::string& s) {
    if (s == "forest") return FinalKind::Forest;
    if (s == "ann") return FinalKind::Ann;
    throw ConfigError("unknown final model kind '" + s + "'");
}

ClassGate class_gate(const std::vector<std::string>& model_names, const Matrix& performance,
                     double confidence) {
    if (!(confidence > 0.0 && confidence <= 1.0)) {
        throw ConfigError("gate confidence must lie in (0, 1]");
    }
    if (performance.rows == 0 || performance.rows != model_names.size()) {
        throw DataError("gate needs one performance row per model");
    }

    ClassGate gate;
    gate.confidence = confidence;
    gate.model_names = model_names;
    gate.performance = performance;
    gate.best_per_class.resize(performance.cols);
    gate.threshold_per_class.resize(performance.cols);
    gate.passes.resize(performance.cols);

    for (std::size_t k = 0; k < performance.cols; ++k) {
        double best = performance.at(0, k);
        for (std::size_t m = 1; m < performance.rows; ++m) {
            best = std::max(best, performance.at(m, k));
        }
        gate.best_per_class[k] = best;
        gate.threshold_per_class[k] = best * confidence;
        gate.passes[k].resize(performance.rows);
        for (std::size_t m = 0; m < performance.rows; ++m) {
            gate.passes[k][m] = performance.at(m, k) >= gate.threshold_per_class[k];
        }
    }
    return gate;
}

FinalChoice select_from_predictions(std::span<const int> truth,
                                    std::span<const int> forest_predictions,
                                    std::span<const int> ann_predictions) {
    if (truth.empty()) throw DataError("final selection needs a non-empty validation set");
    if (truth.size() != forest_predictions.size() || truth.size() != ann_predictions.size()) {
        throw ShapeError("final selection: prediction vectors must match the validation size");
    }

    FinalChoice choice;
    choice.validation_size = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (forest_predictions[i] == truth[i]) ++choice.forest_correct;
        if (ann_predictions[i] == truth[i]) ++choice.ann_correct;
    }
    choice.forest_accuracy =
        static_cast<double>(choice.forest_correct) / static_cast<double>(truth.size());
    choice.ann_accuracy =
        static_cast<double>(choice.ann_correct) / static_cast<double>(truth.size());
    choice.chosen =
        choice.ann_correct > choice.forest_correct ? FinalKind::Ann : FinalKind::Forest;
    return choice;
}

FinalChoice select_final(const ForestModel& forest, const NetModel& ann,
                         const Matrix& forest_input, const Matrix& ann_input,
                         std::span<const int> truth) {
    if (forest_input.rows != truth.size() || ann_input.rows != truth.size()) {
        throw ShapeError("final selection: validation inputs must match the label count");
    }
    const auto forest_pred = predict_forest(forest, forest_input);
    const auto ann_pred = predict_net_labels(ann, ann_input);
    return select_from_predictions(truth, forest_pred, ann_pred);
}

} // namespace blendids
