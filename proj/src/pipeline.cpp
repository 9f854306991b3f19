#include "blendids/pipeline.hpp"

#include <algorithm>

#include "blendids/errors.hpp"
#include "blendids/rng.hpp"

namespace blendids {

namespace {

TrainSpec net_spec_from(const NetConfig& config, std::uint64_t seed) {
    TrainSpec spec;
    spec.epochs = config.epochs;
    spec.batch_size = config.batch_size;
    spec.patience = config.patience;
    spec.seed = seed;
    if (config.optimizer == "sgd") {
        spec.plain_sgd = true;
        spec.sgd_rate = config.learning_rate;
    } else {
        spec.adam.alpha = config.learning_rate;
    }
    return spec;
}

std::vector<std::size_t> net_layers(std::size_t input, const std::vector<std::size_t>& hidden,
                                    int classes) {
    std::vector<std::size_t> layers;
    layers.push_back(input);
    layers.insert(layers.end(), hidden.begin(), hidden.end());
    layers.push_back(static_cast<std::size_t>(classes));
    return layers;
}

} // namespace

std::vector<EvaluationReport> report_all_models(const BlendEnsemble& blend, const NetModel& net,
                                                bool ann_on_raw, FinalKind chosen,
                                                const Dataset& validation,
                                                const std::string& dataset_tag,
                                                const std::string& split_tag, std::uint64_t seed) {
    const Matrix validation_meta = blend_meta_matrix(blend, validation.features);
    const Matrix& ann_input = ann_on_raw ? validation.features : validation_meta;

    auto report = [&](const std::string& name, const std::vector<int>& predicted) {
        return evaluate_predictions(name, dataset_tag, split_tag, seed, validation.labels,
                                    predicted, validation.class_count);
    };
    const auto nb_pred = predict(blend.bases[1], validation.features);
    const auto svm_pred = predict(blend.bases[0], validation.features);
    const auto tree_pred = predict(blend.bases[2], validation.features);
    const auto forest_pred = predict_forest(blend.forest, validation_meta);
    const auto ann_pred = predict_net_labels(net, ann_input);
    const auto& final_pred = chosen == FinalKind::Forest ? forest_pred : ann_pred;

    std::vector<EvaluationReport> reports;
    reports.push_back(report("naive_bayes", nb_pred));
    reports.push_back(report("svm", svm_pred));
    reports.push_back(report("decision_tree", tree_pred));
    reports.push_back(report("random_forest", forest_pred));
    reports.push_back(report("ann", ann_pred));
    reports.push_back(report("final:" + to_string(chosen), final_pred));
    return reports;
}

FitResult fit_and_evaluate(const Dataset& train, const Dataset& validation,
                           const RunConfig& config, std::uint64_t master_seed,
                           const std::string& split_tag) {
    FitResult result;
    result.blend = blend_pipeline(train, config.blend, master_seed);

    // The ANN consumes the derived meta dataset unless told to take the raw
    // (already scaled) features.
    const OutputMode mode = output_mode_from_string(config.net.output_mode);
    const std::uint64_t net_seed = derive_seed(master_seed, SeedRole::Net);
    Matrix net_train_x;
    std::vector<int> net_train_y;
    if (config.net.on_raw_features) {
        net_train_x = train.features;
        net_train_y = train.labels;
    } else {
        const Dataset holdout = take_rows(train, result.blend.blend_split.test_indices);
        net_train_x = blend_meta_matrix(result.blend, holdout.features);
        net_train_y = holdout.labels;
    }
    result.net = train_net(net_train_x, net_train_y, train.class_count,
                           net_layers(net_train_x.cols, config.net.hidden, train.class_count),
                           net_spec_from(config.net, net_seed), mode);

    const Matrix validation_meta = blend_meta_matrix(result.blend, validation.features);
    const Matrix& ann_input = config.net.on_raw_features ? validation.features : validation_meta;
    result.final = select_final(result.blend.forest, result.net, validation_meta, ann_input,
                                validation.labels);

    const std::string dataset_tag =
        config.dataset.provenance.empty() ? train.schema.name : config.dataset.provenance;
    result.reports = report_all_models(result.blend, result.net, config.net.on_raw_features,
                                       result.final.chosen, validation, dataset_tag, split_tag,
                                       config.seed);

    // Per-class recall table across the five models feeds the advisory gate.
    Matrix recalls(5, static_cast<std::size_t>(validation.class_count));
    const std::vector<std::string> names{"naive_bayes", "svm", "decision_tree", "random_forest",
                                         "ann"};
    for (std::size_t m = 0; m < 5; ++m) {
        const auto row = per_class_recall(result.reports[m].confusion);
        std::copy(row.begin(), row.end(), recalls.row(m).begin());
    }
    result.final.gate = class_gate(names, recalls, config.gate_confidence);
    return result;
}

TrainOutcome run_training(const Dataset& loaded, const RunConfig& config) {
    config.validate();

    Dataset cleaned = clean(loaded);
    if (cleaned.size() < 4) {
        throw DataError("dataset has only " + std::to_string(cleaned.size()) +
                        " usable rows after cleaning");
    }
    if (cleaned.class_count < 2) {
        throw DataError("training needs at least two classes, schema encodes " +
                        std::to_string(cleaned.class_count));
    }

    TrainOutcome outcome;
    TrainedPipeline& pipeline = outcome.pipeline;
    pipeline.schema = cleaned.schema;
    pipeline.categorical_encodings = cleaned.categorical_encodings;
    pipeline.config = config;
    pipeline.ann_on_raw = config.net.on_raw_features;

    Dataset scaled = cleaned;
    if (config.preprocess.minmax) {
        auto [d, scaler] = minmax_fit_transform(scaled);
        scaled = std::move(d);
        pipeline.minmax = std::move(scaler);
    }
    if (config.preprocess.standard) {
        auto [d, scaler] = standard_fit_transform(scaled);
        scaled = std::move(d);
        pipeline.standard = std::move(scaler);
    }

    const SplitPlan outer = split(scaled, config.split.ratio,
                                  derive_seed(config.seed, SeedRole::OuterSplit),
                                  config.split.stratified);
    const Dataset train = take_rows(scaled, outer.train_indices);
    const Dataset test = take_rows(scaled, outer.test_indices);

    FitResult fit = fit_and_evaluate(train, test, config, config.seed,
                                     format_ratio(config.split.ratio) + " test");
    pipeline.blend = std::move(fit.blend);
    pipeline.net = std::move(fit.net);
    pipeline.final = std::move(fit.final);
    outcome.reports = std::move(fit.reports);
    outcome.test_slice = take_rows(cleaned, outer.test_indices);

    // Freeze a handful of test rows plus their routed predictions into the
    // bundle so a load can prove it reproduces this pipeline.
    const std::size_t keep = std::min<std::size_t>(test.size(), 32);
    pipeline.selfcheck_rows = Matrix(keep, test.feature_count());
    for (std::size_t r = 0; r < keep; ++r) {
        const auto row = test.features.row(r);
        std::copy(row.begin(), row.end(), pipeline.selfcheck_rows.row(r).begin());
        pipeline.selfcheck_predictions.push_back(
            pipeline_predict_scaled(pipeline, row).label);
    }
    return outcome;
}

std::vector<double> scale_row(const TrainedPipeline& pipeline, std::span<const double> raw) {
    std::vector<double> row(raw.begin(), raw.end());
    if (pipeline.minmax) pipeline.minmax->transform_row(row);
    if (pipeline.standard) pipeline.standard->transform_row(row);
    return row;
}

PipelinePrediction pipeline_predict_scaled(const TrainedPipeline& pipeline,
                                           std::span<const double> scaled) {
    PipelinePrediction out;
    const auto meta = blend_meta_row(pipeline.blend, scaled);
    out.forest_votes = forest_vote_fractions(pipeline.blend.forest, meta);
    out.forest_label = static_cast<int>(
        std::max_element(out.forest_votes.begin(), out.forest_votes.end()) -
        out.forest_votes.begin());

    const NetPrediction net_out = pipeline.ann_on_raw
                                      ? predict_net(pipeline.net, scaled)
                                      : predict_net(pipeline.net, meta);
    out.ann_label = net_out.label;
    out.ann_probabilities = net_out.probabilities;

    out.label = pipeline.final.chosen == FinalKind::Forest ? out.forest_label : out.ann_label;
    return out;
}

PipelinePrediction pipeline_predict_raw(const TrainedPipeline& pipeline,
                                        std::span<const double> raw) {
    return pipeline_predict_scaled(pipeline, scale_row(pipeline, raw));
}

} // namespace blendids
