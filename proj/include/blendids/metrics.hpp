#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace blendids {

// C x C counts, cell(truth, predicted). The binary accessors treat class 1 as
// the positive (attack) class.
struct ConfusionMatrix {
    int classes = 0;
    std::vector<std::uint64_t> cells;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int c)
        : classes(c), cells(static_cast<std::size_t>(c) * static_cast<std::size_t>(c), 0) {}

    std::uint64_t& cell(int truth, int predicted);
    std::uint64_t cell(int truth, int predicted) const;
    std::uint64_t total() const;
    std::uint64_t trace() const;

    std::uint64_t tp() const;   // truth 1, predicted 1
    std::uint64_t tn() const;   // truth 0, predicted 0
    std::uint64_t fp() const;   // truth 0, predicted 1
    std::uint64_t fn() const;   // truth 1, predicted 0
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          int classes);

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Binary matrices use the positive-class formulas directly; larger ones
// macro-average the one-vs-rest values. Zero denominators yield 0, never an
// error, so heavily imbalanced runs cannot crash the report path.
Metrics compute_metrics(const ConfusionMatrix& cm);

// One-vs-rest recall per class: cell(k,k) / row-sum(k), 0 when the class has
// no rows. Feeds the per-class gate.
std::vector<double> per_class_recall(const ConfusionMatrix& cm);

struct EvaluationReport {
    std::string model;
    std::string dataset;
    std::string split;      // free-text provenance, e.g. "80:20 test"
    std::uint64_t seed = 0;
    ConfusionMatrix confusion;
    Metrics metrics;
};

EvaluationReport evaluate_predictions(std::string model, std::string dataset, std::string split,
                                      std::uint64_t seed, std::span<const int> truth,
                                      std::span<const int> predicted, int classes);

} // namespace blendids
