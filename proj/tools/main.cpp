#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "blendids/commands.hpp"
#include "blendids/errors.hpp"

namespace {

blendids::RunConfig load_config_with_overrides(const std::string& config_path,
                                               std::uint64_t* seed, const std::string& out) {
    blendids::RunConfig config = blendids::load_run_config(config_path);
    if (seed) config.seed = *seed;
    if (!out.empty()) config.out_dir = out;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase blended-ensemble intrusion detection toolkit"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "train the full two-level pipeline");
    std::string train_config;
    std::string train_out;
    std::uint64_t train_seed = 0;
    bool train_seed_set = false;
    train->add_option("--config", train_config, "run config JSON")->required();
    train->add_option("--seed", train_seed, "master seed override")
        ->each([&](const std::string&) { train_seed_set = true; });
    train->add_option("--out", train_out, "output directory override");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a trained bundle on labeled data");
    std::string eval_bundle, eval_data, eval_out, eval_format = "table";
    evaluate->add_option("--bundle", eval_bundle, "bundle JSON path")->required();
    evaluate->add_option("--data", eval_data, "labeled CSV")->required();
    evaluate->add_option("--out", eval_out, "directory for report JSON files");
    evaluate->add_option("--format", eval_format, "table, csv or json");

    // predict
    auto* predict = app.add_subcommand("predict", "label new rows with a trained bundle");
    std::string pred_bundle, pred_data, pred_out;
    predict->add_option("--bundle", pred_bundle, "bundle JSON path")->required();
    predict->add_option("--data", pred_data, "CSV (label column optional)")->required();
    predict->add_option("--out", pred_out, "predictions CSV to write")->required();

    // crossval
    auto* crossval = app.add_subcommand("crossval", "k-fold run with optional ratio sweep");
    std::string cv_config, cv_out;
    std::uint64_t cv_seed = 0;
    bool cv_seed_set = false;
    std::size_t cv_folds = 0;
    bool cv_sweep = false;
    crossval->add_option("--config", cv_config, "run config JSON")->required();
    crossval->add_option("--folds", cv_folds, "fold count override");
    crossval->add_flag("--sweep-ratios", cv_sweep, "also compare 60:40, 70:30 and 80:20 splits");
    crossval->add_option("--seed", cv_seed, "master seed override")
        ->each([&](const std::string&) { cv_seed_set = true; });
    crossval->add_option("--out", cv_out, "output directory override");

    // report
    auto* report = app.add_subcommand("report", "render stored evaluation reports");
    std::string rep_dir, rep_format = "table";
    report->add_option("--reports", rep_dir, "directory holding report JSON files")->required();
    report->add_option("--format", rep_format, "table, csv or json");

    // gen-synth
    auto* synth = app.add_subcommand("gen-synth", "write a synthetic two-blob flow dataset");
    blendids::SynthConfig synth_config;
    std::string synth_out;
    bool balanced = false;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--rows", synth_config.rows, "row count");
    synth->add_option("--features", synth_config.features, "feature count");
    synth->add_option("--attack-fraction", synth_config.attack_fraction,
                      "share of attack rows (default 0.06)");
    synth->add_flag("--balanced", balanced, "shortcut for --attack-fraction 0.5");
    synth->add_option("--mean-offset", synth_config.mean_offset, "blob center distance");
    synth->add_option("--noise", synth_config.label_noise, "label flip fraction");
    synth->add_option("--seed", synth_config.seed, "generator seed");

    try {
        app.parse(argc, argv);

        if (*train) {
            blendids::cmd_train(load_config_with_overrides(
                train_config, train_seed_set ? &train_seed : nullptr, train_out));
        } else if (*evaluate) {
            blendids::cmd_evaluate(eval_bundle, eval_data, eval_out,
                                   blendids::report_format_from_string(eval_format));
        } else if (*predict) {
            blendids::cmd_predict(pred_bundle, pred_data, pred_out);
        } else if (*crossval) {
            blendids::RunConfig config = load_config_with_overrides(
                cv_config, cv_seed_set ? &cv_seed : nullptr, cv_out);
            if (cv_folds > 0) config.folds = cv_folds;
            blendids::cmd_crossval(config, cv_sweep);
        } else if (*report) {
            blendids::cmd_report(rep_dir, blendids::report_format_from_string(rep_format));
        } else if (*synth) {
            if (balanced) synth_config.attack_fraction = 0.5;
            blendids::cmd_gen_synth(synth_config, synth_out);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const blendids::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const blendids::TrainError& e) {
        std::cerr << "training error: " << e.what() << "\n";
        return 3;
    } catch (const blendids::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
