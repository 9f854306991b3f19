#include <algorithm>
#include <cmath>

#include "blendids/base_model.hpp"
#include "blendids/errors.hpp"
#include "blendids/rng.hpp"

#include "base_detail.hpp"

namespace blendids {

namespace {

double margin(const SvmBinary& m, std::span<const double> x) {
    double s = m.bias;
    for (std::size_t j = 0; j < x.size(); ++j) s += m.weights[j] * x[j];
    return s;
}

// Stochastic subgradient descent on the L2-regularized hinge loss with the
// 1/(lambda*t) step schedule. The bias rides along unregularized.
SvmBinary train_binary(const Dataset& train, int positive_class, double lambda,
                       std::size_t epochs, std::uint64_t seed) {
    const std::size_t n = train.size();
    const std::size_t d = train.feature_count();

    bool has_pos = false, has_neg = false;
    for (int label : train.labels) (label == positive_class ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) {
        throw TrainError("SVM subproblem for class " + std::to_string(positive_class) +
                         " needs rows on both sides");
    }

    SvmBinary m;
    m.weights.assign(d, 0.0);

    auto rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t step = 0; step < n; ++step) {
            ++t;
            const std::size_t i = pick(rng);
            const auto x = train.features.row(i);
            const double y = train.labels[i] == positive_class ? 1.0 : -1.0;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double scale = 1.0 - eta * lambda;
            if (y * margin(m, x) < 1.0) {
                for (std::size_t j = 0; j < d; ++j) {
                    m.weights[j] = scale * m.weights[j] + eta * y * x[j];
                }
                m.bias += eta * y;
            } else {
                for (double& w : m.weights) w *= scale;
            }
        }
    }
    return m;
}

} // namespace

BaseModel fit_svm(const Dataset& train, const SvmConfig& config, std::uint64_t seed) {
    if (train.size() < 2) throw DataError("SVM needs at least 2 training rows");
    if (config.lambda <= 0.0) throw ConfigError("SVM lambda must be positive");
    if (config.epochs == 0) throw ConfigError("SVM epochs must be >= 1");
    for (double v : train.features.values) {
        if (!std::isfinite(v)) throw TrainError("SVM training data contains non-finite values");
    }

    SvmParams svm;
    svm.lambda = config.lambda;
    svm.epochs = config.epochs;
    if (train.class_count == 2) {
        svm.machines.push_back(train_binary(train, 1, config.lambda, config.epochs, seed));
    } else {
        for (int k = 0; k < train.class_count; ++k) {
            svm.machines.push_back(train_binary(train, k, config.lambda, config.epochs,
                                                derive_stream(seed, static_cast<std::uint64_t>(k))));
        }
    }

    BaseModel model;
    model.kind = BaseKind::Svm;
    model.classes = train.class_count;
    model.feature_count = train.feature_count();
    model.params = std::move(svm);
    return model;
}

std::vector<double> svm_scores(const SvmParams& svm, std::span<const double> x) {
    if (svm.machines.size() == 1) {
        const double m = margin(svm.machines[0], x);
        return {-m, m};
    }
    std::vector<double> scores;
    scores.reserve(svm.machines.size());
    for (const auto& m : svm.machines) scores.push_back(margin(m, x));
    return scores;
}

int svm_predict(const SvmParams& svm, std::span<const double> x) {
    const auto scores = svm_scores(svm, x);
    return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

} // namespace blendids
