#include "blendids/metrics.hpp"

#include <numeric>

#include "blendids/errors.hpp"

namespace blendids {

namespace {

std::size_t idx(int classes, int truth, int predicted) {
    return static_cast<std::size_t>(truth) * static_cast<std::size_t>(classes) +
           static_cast<std::size_t>(predicted);
}

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) {
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

} // namespace

std::uint64_t& ConfusionMatrix::cell(int truth, int predicted) {
    return cells[idx(classes, truth, predicted)];
}

std::uint64_t ConfusionMatrix::cell(int truth, int predicted) const {
    return cells[idx(classes, truth, predicted)];
}

std::uint64_t ConfusionMatrix::total() const {
    return std::accumulate(cells.begin(), cells.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t t = 0;
    for (int k = 0; k < classes; ++k) t += cell(k, k);
    return t;
}

std::uint64_t ConfusionMatrix::tp() const { return cell(1, 1); }
std::uint64_t ConfusionMatrix::tn() const { return cell(0, 0); }
std::uint64_t ConfusionMatrix::fp() const { return cell(0, 1); }
std::uint64_t ConfusionMatrix::fn() const { return cell(1, 0); }

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          int classes) {
    if (truth.size() != predicted.size()) {
        throw ShapeError("confusion: " + std::to_string(truth.size()) + " truth labels vs " +
                         std::to_string(predicted.size()) + " predictions");
    }
    if (truth.empty()) throw DataError("confusion matrix needs at least one sample");
    if (classes < 2) throw ConfigError("confusion matrix needs at least 2 classes");

    ConfusionMatrix cm(classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= classes || predicted[i] < 0 || predicted[i] >= classes) {
            throw DataError("label out of range at sample " + std::to_string(i));
        }
        ++cm.cell(truth[i], predicted[i]);
    }
    return cm;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DataError("cannot compute metrics of an empty confusion matrix");

    Metrics m;
    m.accuracy = ratio(cm.trace(), cm.total());
    if (cm.classes == 2) {
        m.precision = ratio(cm.tp(), cm.tp() + cm.fp());
        m.recall = ratio(cm.tp(), cm.tp() + cm.fn());
        m.f1 = f1_of(m.precision, m.recall);
        return m;
    }

    // Macro averaging over one-vs-rest values.
    double psum = 0.0, rsum = 0.0, fsum = 0.0;
    for (int k = 0; k < cm.classes; ++k) {
        std::uint64_t tp = cm.cell(k, k), fp = 0, fn = 0;
        for (int j = 0; j < cm.classes; ++j) {
            if (j == k) continue;
            fp += cm.cell(j, k);
            fn += cm.cell(k, j);
        }
        const double p = ratio(tp, tp + fp);
        const double r = ratio(tp, tp + fn);
        psum += p;
        rsum += r;
        fsum += f1_of(p, r);
    }
    const double c = static_cast<double>(cm.classes);
    m.precision = psum / c;
    m.recall = rsum / c;
    m.f1 = fsum / c;
    return m;
}

std::vector<double> per_class_recall(const ConfusionMatrix& cm) {
    std::vector<double> out(static_cast<std::size_t>(cm.classes));
    for (int k = 0; k < cm.classes; ++k) {
        std::uint64_t row = 0;
        for (int j = 0; j < cm.classes; ++j) row += cm.cell(k, j);
        out[static_cast<std::size_t>(k)] = ratio(cm.cell(k, k), row);
    }
    return out;
}

EvaluationReport evaluate_predictions(std::string model, std::string dataset, std::string split,
                                      std::uint64_t seed, std::span<const int> truth,
                                      std::span<const int> predicted, int classes) {
    EvaluationReport report;
    report.model = std::move(model);
    report.dataset = std::move(dataset);
    report.split = std::move(split);
    report.seed = seed;
    report.confusion = confusion(truth, predicted, classes);
    report.metrics = compute_metrics(report.confusion);
    return report;
}

} // namespace blendids
