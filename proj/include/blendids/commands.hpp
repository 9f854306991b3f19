#pragma once

#include <filesystem>

#include "blendids/report.hpp"
#include "blendids/run_config.hpp"
#include "blendids/synth.hpp"

// Command bodies behind the CLI verbs. Each throws the typed errors that the
// CLI front end maps to exit codes (config 1, data 2, training 3).
namespace blendids {

// Full training run: writes bundle.json, reports/*.json and test_slice.csv
// under config.out_dir and prints the metric table.
void cmd_train(const RunConfig& config);

// Re-scores a bundle on new data; prints reports and optionally saves them.
void cmd_evaluate(const std::filesystem::path& bundle_path,
                  const std::filesystem::path& data_path,
                  const std::filesystem::path& out_dir,   // empty = print only
                  ReportFormat format);

// One prediction row per data row: chosen class id plus both candidates'
// score vectors. The label column may be absent from the data.
void cmd_predict(const std::filesystem::path& bundle_path,
                 const std::filesystem::path& data_path,
                 const std::filesystem::path& out_path);

// K-fold run of the whole two-level pipeline, plus the 60:40/70:30/80:20
// ratio sweep when asked. Writes crossval.json and crossval.csv.
void cmd_crossval(const RunConfig& config, bool sweep_ratios);

// Renders every report found under a directory.
void cmd_report(const std::filesystem::path& reports_dir, ReportFormat format);

// Writes synth.csv and synth_schema.json into a directory.
void cmd_gen_synth(const SynthConfig& config, const std::filesystem::path& out_dir);

} // namespace blendids
