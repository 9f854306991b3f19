#include "blendids/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blendids/bundle.hpp"
#include "blendids/errors.hpp"
#include "blendids/pipeline.hpp"
#include "blendids/rng.hpp"

namespace blendids {

namespace {

std::string safe_filename(std::string name) {
    std::replace(name.begin(), name.end(), ':', '_');
    return name;
}

void save_reports(const std::vector<EvaluationReport>& reports,
                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& r : reports) save_report(r, dir / (safe_filename(r.model) + ".json"));
}

Dataset load_for_pipeline(const TrainedPipeline& pipeline, const std::filesystem::path& data_path,
                          bool require_label) {
    LoadOptions options;
    options.require_label = require_label;
    options.fixed_dicts = &pipeline.categorical_encodings;
    return load_csv(data_path, pipeline.schema, options);
}

void scale_in_place(const TrainedPipeline& pipeline, Dataset& d) {
    if (pipeline.minmax) pipeline.minmax->transform(d.features);
    if (pipeline.standard) pipeline.standard->transform(d.features);
}

std::string format_double(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

} // namespace

void cmd_train(const RunConfig& config) {
    config.validate();
    const FeatureSchema schema = load_schema(config.dataset.schema);
    const Dataset loaded = load_csv(config.dataset.csv, schema);

    TrainOutcome outcome = run_training(loaded, config);

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);
    save_bundle(outcome.pipeline, out_dir / "bundle.json");
    save_reports(outcome.reports, out_dir / "reports");
    write_csv(outcome.test_slice, out_dir / "test_slice.csv");

    std::cout << render_table(outcome.reports);
    std::cout << "selected model: " << to_string(outcome.pipeline.final.chosen)
              << " (forest " << outcome.pipeline.final.forest_correct << "/"
              << outcome.pipeline.final.validation_size << " vs ann "
              << outcome.pipeline.final.ann_correct << "/"
              << outcome.pipeline.final.validation_size << " correct)\n";
    std::cout << "bundle: " << (out_dir / "bundle.json").string() << "\n";
}

void cmd_evaluate(const std::filesystem::path& bundle_path,
                  const std::filesystem::path& data_path, const std::filesystem::path& out_dir,
                  ReportFormat format) {
    const TrainedPipeline pipeline = load_bundle(bundle_path);
    Dataset data = clean(load_for_pipeline(pipeline, data_path, /*require_label=*/true));
    if (data.size() == 0) throw DataError("no usable rows in " + data_path.string());
    scale_in_place(pipeline, data);

    const auto reports =
        report_all_models(pipeline.blend, pipeline.net, pipeline.ann_on_raw,
                          pipeline.final.chosen, data, data_path.stem().string(), "evaluate",
                          pipeline.config.seed);
    if (!out_dir.empty()) save_reports(reports, out_dir);
    std::cout << render_reports(reports, format);
}

void cmd_predict(const std::filesystem::path& bundle_path,
                 const std::filesystem::path& data_path, const std::filesystem::path& out_path) {
    const TrainedPipeline pipeline = load_bundle(bundle_path);
    const Dataset data = load_for_pipeline(pipeline, data_path, /*require_label=*/false);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write predictions to " + out_path.string());

    const int classes = pipeline.blend.bases[0].classes;
    out << "predicted";
    for (int c = 0; c < classes; ++c) out << ",forest_vote_" << c;
    for (int c = 0; c < classes; ++c) out << ",ann_prob_" << c;
    out << '\n';

    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto raw = data.features.row(r);
        if (!std::all_of(raw.begin(), raw.end(), [](double v) { return std::isfinite(v); })) {
            throw DataError("row " + std::to_string(r + 1) +
                            " contains missing values; prediction input must be complete");
        }
        const PipelinePrediction p = pipeline_predict_raw(pipeline, raw);
        out << p.label;
        for (double v : p.forest_votes) out << ',' << format_double(v);
        for (double v : p.ann_probabilities) out << ',' << format_double(v);
        out << '\n';
    }
    std::cout << data.size() << " predictions written to " << out_path.string() << "\n";
}

namespace {

struct SummaryRow {
    std::string tag;
    std::string chosen;
    Metrics metrics;
};

nlohmann::json summary_row_json(const SummaryRow& row) {
    return {{"run", row.tag},
            {"chosen", row.chosen},
            {"accuracy", row.metrics.accuracy},
            {"precision", row.metrics.precision},
            {"recall", row.metrics.recall},
            {"f1", row.metrics.f1}};
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / n)};
}

} // namespace

void cmd_crossval(const RunConfig& config, bool sweep_ratios) {
    config.validate();
    const FeatureSchema schema = load_schema(config.dataset.schema);
    const Dataset loaded = load_csv(config.dataset.csv, schema);

    Dataset scaled = clean(loaded);
    if (config.preprocess.minmax) scaled = minmax_fit_transform(scaled).first;
    if (config.preprocess.standard) scaled = standard_fit_transform(scaled).first;

    const FoldPlan plan = kfold(scaled, config.folds, derive_seed(config.seed, SeedRole::Kfold));

    std::vector<SummaryRow> rows;
    std::vector<double> accuracies;
    for (std::size_t f = 0; f < plan.k; ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < plan.k; ++g) {
            if (g == f) continue;
            train_idx.insert(train_idx.end(), plan.folds[g].begin(), plan.folds[g].end());
        }
        std::sort(train_idx.begin(), train_idx.end());
        const Dataset train = take_rows(scaled, train_idx);
        const Dataset test = take_rows(scaled, plan.folds[f]);

        const std::string tag = "fold " + std::to_string(f + 1) + "/" + std::to_string(plan.k);
        const FitResult fit = fit_and_evaluate(train, test, config,
                                               derive_stream(config.seed, f), tag);
        const EvaluationReport& final_report = fit.reports.back();
        rows.push_back({tag, to_string(fit.final.chosen), final_report.metrics});
        accuracies.push_back(final_report.metrics.accuracy);
    }

    nlohmann::json out_json;
    out_json["folds"] = nlohmann::json::array();
    std::ostringstream table;
    table << "run,chosen,accuracy,precision,recall,f1\n";
    for (const auto& row : rows) {
        out_json["folds"].push_back(summary_row_json(row));
        table << row.tag << ',' << row.chosen << ',' << row.metrics.accuracy << ','
              << row.metrics.precision << ',' << row.metrics.recall << ',' << row.metrics.f1
              << '\n';
    }
    const auto [mean_acc, std_acc] = mean_std(accuracies);
    out_json["summary"] = {{"mean_accuracy", mean_acc}, {"std_accuracy", std_acc}};
    table << "mean accuracy," << mean_acc << " +/- " << std_acc << '\n';

    if (sweep_ratios) {
        out_json["ratio_sweep"] = nlohmann::json::array();
        for (const auto& ratio : {std::pair{60, 40}, std::pair{70, 30}, std::pair{80, 20}}) {
            const SplitPlan outer = split(scaled, ratio,
                                          derive_seed(config.seed, SeedRole::OuterSplit),
                                          config.split.stratified);
            const Dataset train = take_rows(scaled, outer.train_indices);
            const Dataset test = take_rows(scaled, outer.test_indices);
            const std::string tag = format_ratio(ratio);
            const FitResult fit = fit_and_evaluate(train, test, config, config.seed, tag);
            const SummaryRow row{tag, to_string(fit.final.chosen), fit.reports.back().metrics};
            out_json["ratio_sweep"].push_back(summary_row_json(row));
            table << "ratio " << tag << ',' << row.chosen << ',' << row.metrics.accuracy << ','
                  << row.metrics.precision << ',' << row.metrics.recall << ',' << row.metrics.f1
                  << '\n';
        }
    }

    const std::filesystem::path out_dir(config.out_dir);
    std::filesystem::create_directories(out_dir);
    std::ofstream json_out(out_dir / "crossval.json", std::ios::binary);
    json_out << out_json.dump(2) << '\n';
    std::ofstream csv_out(out_dir / "crossval.csv", std::ios::binary);
    csv_out << table.str();

    std::cout << table.str();
}

void cmd_report(const std::filesystem::path& reports_dir, ReportFormat format) {
    const auto reports = load_reports_dir(reports_dir);
    std::cout << render_reports(reports, format);
}

void cmd_gen_synth(const SynthConfig& config, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Dataset d = make_synthetic(config);
    write_csv(d, out_dir / "synth.csv");
    save_schema(d.schema, out_dir / "synth_schema.json");
    std::cout << d.size() << " rows (" << d.feature_count() << " features) written to "
              << (out_dir / "synth.csv").string() << "\n";
}

} // namespace blendids
