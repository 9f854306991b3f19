#pragma once

#include <span>
#include <string>
#include <vector>

#include "blendids/forest.hpp"
#include "blendids/matrix.hpp"
#include "blendids/net.hpp"

namespace blendids {

// Per-class performance gate: best recall per class across candidate models
// and the confidence-scaled threshold derived from it. Diagnostics only; the
// final choice rests on the validation correct-count alone.
struct ClassGate {
    double confidence = 0.9;                      // scales best into threshold
    std::vector<std::string> model_names;
    Matrix performance;                           // models x classes (per-class recall)
    std::vector<double> best_per_class;
    std::vector<double> threshold_per_class;
    std::vector<std::vector<bool>> passes;        // [class][model]: performance >= threshold
};

ClassGate class_gate(const std::vector<std::string>& model_names, const Matrix& performance,
                     double confidence);

enum class FinalKind { Forest, Ann };

std::string to_string(FinalKind kind);
FinalKind final_kind_from_string(const std::string& s);

struct FinalChoice {
    FinalKind chosen = FinalKind::Forest;
    std::size_t forest_correct = 0;
    std::size_t ann_correct = 0;
    std::size_t validation_size = 0;
    double forest_accuracy = 0.0;
    double ann_accuracy = 0.0;
    ClassGate gate;
};

// The indicator-sum argmax over precomputed predictions; ties go to the
// forest.
FinalChoice select_from_predictions(std::span<const int> truth,
                                    std::span<const int> forest_predictions,
                                    std::span<const int> ann_predictions);

// Scores both second-level models on a validation slice disjoint from all
// training portions and keeps the more accurate one.
FinalChoice select_final(const ForestModel& forest, const NetModel& ann,
                         const Matrix& forest_input, const Matrix& ann_input,
                         std::span<const int> truth);

} // namespace blendids
