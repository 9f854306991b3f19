#include <algorithm>
#include <cmath>
#include <numbers>

#include "blendids/base_model.hpp"
#include "blendids/errors.hpp"

#include "base_detail.hpp"

namespace blendids {

namespace {

// Per-class joint log-likelihood: log prior + sum of per-feature Gaussian
// log densities. Log space keeps d >= 12 feature products from underflowing.
std::vector<double> log_posteriors(const NaiveBayesParams& nb, std::span<const double> x) {
    const std::size_t classes = nb.log_priors.size();
    std::vector<double> scores(classes);
    for (std::size_t k = 0; k < classes; ++k) {
        double s = nb.log_priors[k];
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double var = nb.variances.at(k, j);
            const double delta = x[j] - nb.means.at(k, j);
            s += -0.5 * std::log(2.0 * std::numbers::pi * var) - delta * delta / (2.0 * var);
        }
        scores[k] = s;
    }
    return scores;
}

} // namespace

BaseModel fit_naive_bayes(const Dataset& train, const NaiveBayesConfig& config) {
    if (config.variance_floor <= 0.0) throw ConfigError("variance floor must be positive");
    if (train.size() == 0) throw DataError("cannot fit naive Bayes on an empty dataset");
    const std::size_t classes = static_cast<std::size_t>(train.class_count);
    const std::size_t d = train.feature_count();

    std::vector<std::size_t> class_sizes(classes, 0);
    for (int label : train.labels) ++class_sizes[static_cast<std::size_t>(label)];
    for (std::size_t k = 0; k < classes; ++k) {
        if (class_sizes[k] == 0) {
            throw TrainError("class " + std::to_string(k) + " is absent from the training data");
        }
    }

    NaiveBayesParams nb;
    nb.variance_floor = config.variance_floor;
    nb.means = Matrix(classes, d);
    nb.variances = Matrix(classes, d);
    nb.log_priors.resize(classes);

    for (std::size_t r = 0; r < train.size(); ++r) {
        const std::size_t k = static_cast<std::size_t>(train.labels[r]);
        for (std::size_t j = 0; j < d; ++j) nb.means.at(k, j) += train.features.at(r, j);
    }
    for (std::size_t k = 0; k < classes; ++k) {
        for (std::size_t j = 0; j < d; ++j) nb.means.at(k, j) /= static_cast<double>(class_sizes[k]);
    }
    for (std::size_t r = 0; r < train.size(); ++r) {
        const std::size_t k = static_cast<std::size_t>(train.labels[r]);
        for (std::size_t j = 0; j < d; ++j) {
            const double delta = train.features.at(r, j) - nb.means.at(k, j);
            nb.variances.at(k, j) += delta * delta;
        }
    }
    for (std::size_t k = 0; k < classes; ++k) {
        nb.log_priors[k] = std::log(static_cast<double>(class_sizes[k]) /
                                    static_cast<double>(train.size()));
        for (std::size_t j = 0; j < d; ++j) {
            nb.variances.at(k, j) = std::max(
                nb.variances.at(k, j) / static_cast<double>(class_sizes[k]), config.variance_floor);
        }
    }

    BaseModel model;
    model.kind = BaseKind::NaiveBayes;
    model.classes = static_cast<int>(classes);
    model.feature_count = d;
    model.params = std::move(nb);
    return model;
}

int naive_bayes_predict(const NaiveBayesParams& nb, std::span<const double> x) {
    const auto scores = log_posteriors(nb, x);
    return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

std::vector<double> naive_bayes_scores(const NaiveBayesParams& nb, std::span<const double> x) {
    auto scores = log_posteriors(nb, x);
    const double peak = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (double& s : scores) {
        s = std::exp(s - peak);
        total += s;
    }
    for (double& s : scores) s /= total;
    return scores;
}

} // namespace blendids
