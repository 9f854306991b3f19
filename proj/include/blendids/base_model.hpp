#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "blendids/dataset.hpp"
#include "blendids/matrix.hpp"

namespace blendids {

enum class BaseKind { Svm, NaiveBayes, DecisionTree };

std::string to_string(BaseKind kind);

// ---- Gaussian naive Bayes -------------------------------------------------

struct NaiveBayesParams {
    std::vector<double> log_priors;   // length C
    Matrix means;                     // C x d
    Matrix variances;                 // C x d, clamped to >= variance_floor
    double variance_floor = 1e-9;
};

struct NaiveBayesConfig {
    double variance_floor = 1e-9;
};

// ---- Linear soft-margin SVM (hinge loss, 1/(lambda*t) step schedule) -------

struct SvmBinary {
    std::vector<double> weights;
    double bias = 0.0;
};

struct SvmParams {
    std::vector<SvmBinary> machines;   // one for C == 2, else one-vs-rest per class
    double lambda = 1e-4;
    std::size_t epochs = 20;
};

struct SvmConfig {
    double lambda = 1e-4;
    std::size_t epochs = 20;
};

// ---- CART decision tree -----------------------------------------------------

// feature < 0 marks a leaf; counts is the class histogram of the training
// rows that reached it. Routing: x[feature] <= threshold goes left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> counts;
};

struct TreeParams {
    std::vector<TreeNode> nodes;   // nodes[0] is the root
};

struct TreeConfig {
    std::size_t max_depth = 12;        // 0 = unlimited
    std::size_t min_samples_leaf = 2;
};

// ---- Common wrapper ---------------------------------------------------------

struct BaseModel {
    BaseKind kind = BaseKind::DecisionTree;
    int classes = 0;
    std::size_t feature_count = 0;
    std::variant<SvmParams, NaiveBayesParams, TreeParams> params;
};

BaseModel fit_naive_bayes(const Dataset& train, const NaiveBayesConfig& config = {});
BaseModel fit_svm(const Dataset& train, const SvmConfig& config, std::uint64_t seed);
BaseModel fit_tree(const Dataset& train, const TreeConfig& config = {});

// Predicted class id; ties always break to the lowest id.
int predict_one(const BaseModel& model, std::span<const double> x);
std::vector<int> predict(const BaseModel& model, const Matrix& x);

// Length-C score vector. Probabilities for NB and trees, raw margins for SVM.
std::vector<double> predict_scores_one(const BaseModel& model, std::span<const double> x);
Matrix predict_scores(const BaseModel& model, const Matrix& x);

} // namespace blendids
