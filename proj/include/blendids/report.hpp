#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "blendids/metrics.hpp"

namespace blendids {

enum class ReportFormat { Table, Csv, Json };
ReportFormat report_format_from_string(const std::string& s);

nlohmann::json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& j);

void save_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport load_report(const std::filesystem::path& path);

// Recursively collects *.json reports under a directory, sorted by path.
std::vector<EvaluationReport> load_reports_dir(const std::filesystem::path& dir);

// Per-dataset metric groups followed by a technique-vs-accuracy comparison of
// the final models.
std::string render_table(std::span<const EvaluationReport> reports);
std::string render_csv(std::span<const EvaluationReport> reports);
std::string render_json(std::span<const EvaluationReport> reports);
std::string render_reports(std::span<const EvaluationReport> reports, ReportFormat format);

} // namespace blendids
