#include "blendids/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blendids/errors.hpp"

namespace blendids {

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "table") return ReportFormat::Table;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw ConfigError("unknown report format '" + s + "' (expected table, csv or json)");
}

nlohmann::json report_to_json(const EvaluationReport& report) {
    nlohmann::json confusion = nlohmann::json::array();
    for (int t = 0; t < report.confusion.classes; ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (int p = 0; p < report.confusion.classes; ++p) {
            row.push_back(report.confusion.cell(t, p));
        }
        confusion.push_back(std::move(row));
    }
    nlohmann::json j{{"model", report.model},
                     {"dataset", report.dataset},
                     {"split", report.split},
                     {"seed", report.seed},
                     {"classes", report.confusion.classes},
                     {"confusion", confusion},
                     {"metrics",
                      {{"accuracy", report.metrics.accuracy},
                       {"precision", report.metrics.precision},
                       {"recall", report.metrics.recall},
                       {"f1", report.metrics.f1}}}};
    if (report.confusion.classes == 2) {
        // raw counts ride along so every rate can be recomputed downstream
        j["counts"] = {{"tp", report.confusion.tp()},
                       {"tn", report.confusion.tn()},
                       {"fp", report.confusion.fp()},
                       {"fn", report.confusion.fn()}};
    }
    return j;
}

EvaluationReport report_from_json(const nlohmann::json& j) {
    try {
        EvaluationReport report;
        report.model = j.at("model").get<std::string>();
        report.dataset = j.at("dataset").get<std::string>();
        report.split = j.at("split").get<std::string>();
        report.seed = j.at("seed").get<std::uint64_t>();
        const int classes = j.at("classes").get<int>();
        report.confusion = ConfusionMatrix(classes);
        const auto& confusion = j.at("confusion");
        for (int t = 0; t < classes; ++t) {
            for (int p = 0; p < classes; ++p) {
                report.confusion.cell(t, p) = confusion.at(static_cast<std::size_t>(t))
                                                  .at(static_cast<std::size_t>(p))
                                                  .get<std::uint64_t>();
            }
        }
        const auto& metrics = j.at("metrics");
        report.metrics.accuracy = metrics.at("accuracy").get<double>();
        report.metrics.precision = metrics.at("precision").get<double>();
        report.metrics.recall = metrics.at("recall").get<double>();
        report.metrics.f1 = metrics.at("f1").get<double>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write report " + path.string());
    out << report_to_json(report).dump(2) << '\n';
}

EvaluationReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open report " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("report " + path.string() + " is not valid JSON: " + e.what());
    }
    return report_from_json(j);
}

std::vector<EvaluationReport> load_reports_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("report directory " + dir.string() + " does not exist");
    }
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());

    std::vector<EvaluationReport> reports;
    for (const auto& p : paths) {
        try {
            reports.push_back(load_report(p));
        } catch (const DataError&) {
            // other JSON artifacts (bundles, configs) can live next to reports
        }
    }
    if (reports.empty()) throw DataError("no reports found under " + dir.string());
    return reports;
}

namespace {

std::string fixed4(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

} // namespace

std::string render_table(std::span<const EvaluationReport> reports) {
    std::map<std::string, std::vector<const EvaluationReport*>> by_dataset;
    for (const auto& r : reports) by_dataset[r.dataset].push_back(&r);

    std::ostringstream out;
    for (const auto& [dataset, group] : by_dataset) {
        out << "== " << dataset << " ==\n";
        out << std::left << std::setw(22) << "model" << std::right << std::setw(10) << "accuracy"
            << std::setw(11) << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1"
            << '\n';
        for (const auto* r : group) {
            out << std::left << std::setw(22) << r->model << std::right << std::setw(10)
                << fixed4(r->metrics.accuracy) << std::setw(11) << fixed4(r->metrics.precision)
                << std::setw(9) << fixed4(r->metrics.recall) << std::setw(9)
                << fixed4(r->metrics.f1) << '\n';
        }
        out << '\n';
    }

    out << "== technique comparison ==\n";
    out << std::left << std::setw(40) << "technique" << std::right << std::setw(10) << "accuracy"
        << '\n';
    for (const auto& r : reports) {
        if (r.model.rfind("final:", 0) == 0) {
            out << std::left << std::setw(40) << (r.model + " on " + r.dataset) << std::right
                << std::setw(10) << fixed4(r.metrics.accuracy) << '\n';
        }
    }
    return out.str();
}

std::string render_csv(std::span<const EvaluationReport> reports) {
    std::ostringstream out;
    out << "dataset,model,split,seed,accuracy,precision,recall,f1,tp,tn,fp,fn\n";
    for (const auto& r : reports) {
        out << r.dataset << ',' << r.model << ',' << r.split << ',' << r.seed << ','
            << fixed4(r.metrics.accuracy) << ',' << fixed4(r.metrics.precision) << ','
            << fixed4(r.metrics.recall) << ',' << fixed4(r.metrics.f1);
        if (r.confusion.classes == 2) {
            out << ',' << r.confusion.tp() << ',' << r.confusion.tn() << ',' << r.confusion.fp()
                << ',' << r.confusion.fn();
        } else {
            out << ",,,,";
        }
        out << '\n';
    }
    return out.str();
}

std::string render_json(std::span<const EvaluationReport> reports) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) j.push_back(report_to_json(r));
    return j.dump(2) + "\n";
}

std::string render_reports(std::span<const EvaluationReport> reports, ReportFormat format) {
    switch (format) {
        case ReportFormat::Table: return render_table(reports);
        case ReportFormat::Csv: return render_csv(reports);
        case ReportFormat::Json: return render_json(reports);
    }
    return {};
}

} // namespace blendids
