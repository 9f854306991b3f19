#pragma once

#include <span>
#include <vector>

#include "blendids/base_model.hpp"

// Kind-specific prediction entry points shared between the per-classifier
// translation units and the BaseModel dispatch.
namespace blendids {

int naive_bayes_predict(const NaiveBayesParams& nb, std::span<const double> x);
std::vector<double> naive_bayes_scores(const NaiveBayesParams& nb, std::span<const double> x);

int svm_predict(const SvmParams& svm, std::span<const double> x);
std::vector<double> svm_scores(const SvmParams& svm, std::span<const double> x);

} // namespace blendids
