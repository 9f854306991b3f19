#include "blendids/base_model.hpp"

#include <algorithm>
#include <numeric>

#include "blendids/errors.hpp"
#include "blendids/tree.hpp"

#include "base_detail.hpp"

namespace blendids {

std::string to_string(BaseKind kind) {
    switch (kind) {
        case BaseKind::Svm: return "svm";
        case BaseKind::NaiveBayes: return "naive_bayes";
        case BaseKind::DecisionTree: return "decision_tree";
    }
    return "decision_tree";
}

BaseModel fit_tree(const Dataset& train, const TreeConfig& config) {
    if (train.size() == 0) throw DataError("cannot fit a tree on an empty dataset");
    std::vector<std::size_t> rows(train.size());
    std::iota(rows.begin(), rows.end(), 0);
    TreeGrowth growth{config.max_depth, config.min_samples_leaf, 0};
    TreeParams tree = grow_tree(train.features, train.labels, rows, train.class_count,
                                growth, nullptr);

    BaseModel model;
    model.kind = BaseKind::DecisionTree;
    model.classes = train.class_count;
    model.feature_count = train.feature_count();
    model.params = std::move(tree);
    return model;
}

namespace {

void check_width(const BaseModel& model, std::size_t width) {
    if (width != model.feature_count) {
        throw ShapeError("expected " + std::to_string(model.feature_count) +
                         " features, got " + std::to_string(width));
    }
}

} // namespace

int predict_one(const BaseModel& model, std::span<const double> x) {
    check_width(model, x.size());
    switch (model.kind) {
        case BaseKind::Svm: return svm_predict(std::get<SvmParams>(model.params), x);
        case BaseKind::NaiveBayes:
            return naive_bayes_predict(std::get<NaiveBayesParams>(model.params), x);
        case BaseKind::DecisionTree:
            return tree_predict(std::get<TreeParams>(model.params), x);
    }
    throw Error("unreachable base model kind");
}

std::vector<int> predict(const BaseModel& model, const Matrix& x) {
    std::vector<int> out;
    out.reserve(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict_one(model, x.row(r)));
    return out;
}

std::vector<double> predict_scores_one(const BaseModel& model, std::span<const double> x) {
    check_width(model, x.size());
    switch (model.kind) {
        case BaseKind::Svm: return svm_scores(std::get<SvmParams>(model.params), x);
        case BaseKind::NaiveBayes:
            return naive_bayes_scores(std::get<NaiveBayesParams>(model.params), x);
        case BaseKind::DecisionTree: {
            const auto counts = tree_leaf_counts(std::get<TreeParams>(model.params), x);
            const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
            std::vector<double> probs(counts.size());
            for (std::size_t k = 0; k < counts.size(); ++k) probs[k] = counts[k] / total;
            return probs;
        }
    }
    throw Error("unreachable base model kind");
}

Matrix predict_scores(const BaseModel& model, const Matrix& x) {
    Matrix out(x.rows, static_cast<std::size_t>(model.classes));
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto scores = predict_scores_one(model, x.row(r));
        std::copy(scores.begin(), scores.end(), out.row(r).begin());
    }
    return out;
}

} // namespace blendids
