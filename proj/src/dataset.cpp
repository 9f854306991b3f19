#include "blendids/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

#include "blendids/errors.hpp"
#include "blendids/rng.hpp"

namespace blendids {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Reads one CSV record, honoring quoted fields (which may contain commas,
// escaped quotes and newlines). Returns false when the stream is exhausted
// before any character of a new record.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;

    std::string field;
    bool quoted = false;
    while (true) {
        if (c == EOF) {
            fields.push_back(std::move(field));
            return true;
        }
        if (quoted) {
            if (c == '"') {
                const int next = in.get();
                if (next == '"') {
                    field.push_back('"');
                } else {
                    quoted = false;
                    c = next;
                    continue;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\r') {
            // swallow; the '\n' (or EOF) that follows terminates the record
        } else {
            field.push_back(static_cast<char>(c));
        }
        c = in.get();
    }
}

bool is_missing_marker(const std::string& s) {
    if (s.empty()) return true;
    if (s.size() == 3 || s.size() == 4) {
        std::string lower(s);
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        return lower == "nan" || lower == "null";
    }
    return false;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void check_header(const std::vector<std::string>& header, const std::vector<Column>& expected,
                  const std::filesystem::path& path) {
    const std::size_t common = std::min(header.size(), expected.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (header[i] != expected[i].name) {
            throw DataError(path.string() + ": header column " + std::to_string(i + 1) +
                            " is '" + header[i] + "', schema expects '" + expected[i].name + "'");
        }
    }
    if (header.size() < expected.size()) {
        throw DataError(path.string() + ": missing column '" + expected[header.size()].name + "'");
    }
    if (header.size() > expected.size()) {
        throw DataError(path.string() + ": unexpected extra column '" + header[expected.size()] + "'");
    }
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 const LoadOptions& options) {
    schema.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());

    const std::size_t label_idx = schema.label_index();

    std::vector<std::string> header;
    if (!read_record(in, header)) throw DataError(path.string() + ": empty file, header row required");

    // Predict-time data may ship without the label column.
    std::vector<Column> expected = schema.columns;
    bool has_label = true;
    if (!options.require_label && header.size() == schema.columns.size() - 1) {
        expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(label_idx));
        has_label = false;
    }
    check_header(header, expected, path);

    const std::size_t ncols = expected.size();
    std::vector<std::size_t> feature_slot(ncols, SIZE_MAX);   // column -> feature index
    {
        std::size_t slot = 0;
        for (std::size_t i = 0; i < ncols; ++i) {
            if (expected[i].kind != ColumnKind::Label) feature_slot[i] = slot++;
        }
    }
    const std::size_t d = schema.feature_count();

    std::vector<double> flat;
    std::vector<std::string> raw_labels;
    std::vector<std::vector<std::string>> cat_raw(d);   // per feature slot, categorical only
    std::vector<std::string> fields;
    std::size_t row = 0;

    while (read_record(in, fields)) {
        ++row;
        if (fields.size() != ncols) {
            throw DataError(path.string() + ": row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(ncols));
        }
        for (std::size_t i = 0; i < ncols; ++i) {
            const Column& col = expected[i];
            const std::string& cell = fields[i];
            switch (col.kind) {
                case ColumnKind::Numeric: {
                    double v = kNaN;
                    if (!is_missing_marker(cell) && !parse_double(cell, v)) {
                        throw DataError(path.string() + ": row " + std::to_string(row) +
                                        ", column '" + col.name + "': cannot parse '" + cell +
                                        "' as numeric");
                    }
                    flat.push_back(v);
                    break;
                }
                case ColumnKind::Categorical:
                    flat.push_back(kNaN);   // placeholder, encoded below
                    cat_raw[feature_slot[i]].push_back(cell);
                    break;
                case ColumnKind::Label:
                    raw_labels.push_back(cell);
                    break;
            }
        }
    }

    const std::size_t n = row;
    Dataset out;
    out.schema = schema;
    out.provenance = path.string();
    out.features.rows = n;
    out.features.cols = d;
    out.features.values = std::move(flat);

    // Dictionary-encode categorical columns: lexicographic over values seen,
    // or the fixed training-time dictionaries when replaying on new data.
    for (std::size_t i = 0; i < ncols; ++i) {
        if (expected[i].kind != ColumnKind::Categorical) continue;
        const std::size_t slot = feature_slot[i];
        const std::string& cname = expected[i].name;
        std::map<std::string, int> dict;
        if (options.fixed_dicts) {
            auto it = options.fixed_dicts->find(cname);
            if (it == options.fixed_dicts->end()) {
                throw DataError("no stored dictionary for categorical column '" + cname + "'");
            }
            dict = it->second;
        } else {
            std::set<std::string> uniq;
            for (const auto& v : cat_raw[slot]) {
                if (!is_missing_marker(v)) uniq.insert(v);
            }
            int code = 0;
            for (const auto& v : uniq) dict[v] = code++;
        }
        for (std::size_t r = 0; r < n; ++r) {
            const std::string& v = cat_raw[slot][r];
            if (is_missing_marker(v)) continue;   // stays NaN
            auto it = dict.find(v);
            if (it == dict.end()) {
                throw DataError(path.string() + ": row " + std::to_string(r + 1) + ", column '" +
                                cname + "': unseen categorical value '" + v + "'");
            }
            out.features.at(r, slot) = it->second;
        }
        out.categorical_encodings[cname] = std::move(dict);
    }

    if (has_label) {
        std::map<std::string, int> encoding = schema.label_encoding;
        if (encoding.empty()) {
            std::set<std::string> uniq;
            for (const auto& v : raw_labels) {
                if (!is_missing_marker(v)) uniq.insert(v);
            }
            int id = 0;
            for (const auto& v : uniq) encoding[v] = id++;
            out.schema.label_encoding = encoding;
        }
        out.labels.reserve(n);
        for (std::size_t r = 0; r < n; ++r) {
            const std::string& v = raw_labels[r];
            if (is_missing_marker(v)) {
                out.labels.push_back(-1);
                continue;
            }
            auto it = encoding.find(v);
            if (it == encoding.end()) {
                throw DataError(path.string() + ": row " + std::to_string(r + 1) +
                                ": label value '" + v + "' is not in the schema encoding");
            }
            out.labels.push_back(it->second);
        }
        out.class_count = out.schema.class_count();
    } else {
        out.class_count = schema.class_count();
    }
    return out;
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());

    const std::size_t label_idx = d.schema.label_index();
    const bool with_label = d.has_labels();

    // id -> first raw string carrying it (map order makes this deterministic)
    std::map<int, std::string> label_decode;
    for (const auto& [raw, id] : d.schema.label_encoding) label_decode.emplace(id, raw);
    std::map<std::string, std::map<int, std::string>> cat_decode;
    for (const auto& [cname, dict] : d.categorical_encodings) {
        for (const auto& [raw, code] : dict) cat_decode[cname].emplace(code, raw);
    }

    bool first = true;
    for (std::size_t i = 0; i < d.schema.columns.size(); ++i) {
        if (i == label_idx && !with_label) continue;
        out << (first ? "" : ",") << d.schema.columns[i].name;
        first = false;
    }
    out << '\n';

    for (std::size_t r = 0; r < d.size(); ++r) {
        std::size_t slot = 0;
        first = true;
        for (std::size_t i = 0; i < d.schema.columns.size(); ++i) {
            const Column& col = d.schema.columns[i];
            if (col.kind == ColumnKind::Label) {
                if (with_label) {
                    const int id = d.labels[r];
                    out << (first ? "" : ",") << (id < 0 ? "NaN" : label_decode.at(id));
                    first = false;
                }
                continue;
            }
            const double v = d.features.at(r, slot++);
            if (col.kind == ColumnKind::Categorical && !std::isnan(v)) {
                out << (first ? "" : ",") << cat_decode.at(col.name).at(static_cast<int>(v));
            } else {
                out << (first ? "" : ",") << format_double(v);
            }
            first = false;
        }
        out << '\n';
    }
}

Dataset clean(const Dataset& d) {
    Dataset out;
    out.class_count = d.class_count;
    out.schema = d.schema;
    out.categorical_encodings = d.categorical_encodings;
    out.provenance = d.provenance;
    out.features.cols = d.features.cols;

    const std::size_t dcols = d.features.cols;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < d.size(); ++r) {
        const auto row = d.features.row(r);
        const bool finite = std::all_of(row.begin(), row.end(),
                                        [](double v) { return std::isfinite(v); });
        if (!finite) continue;
        const int label = d.has_labels() ? d.labels[r] : 0;
        if (d.has_labels() && label < 0) continue;

        std::string key(dcols * sizeof(double) + sizeof(int), '\0');
        std::memcpy(key.data(), row.data(), dcols * sizeof(double));
        std::memcpy(key.data() + dcols * sizeof(double), &label, sizeof(int));
        if (!seen.insert(std::move(key)).second) continue;

        out.features.values.insert(out.features.values.end(), row.begin(), row.end());
        ++out.features.rows;
        if (d.has_labels()) out.labels.push_back(label);
    }
    return out;
}

Dataset take_rows(const Dataset& d, std::span<const std::size_t> indices) {
    Dataset out;
    out.class_count = d.class_count;
    out.schema = d.schema;
    out.categorical_encodings = d.categorical_encodings;
    out.provenance = d.provenance;
    out.features.cols = d.features.cols;
    out.features.rows = indices.size();
    out.features.values.reserve(indices.size() * d.features.cols);
    for (std::size_t idx : indices) {
        const auto row = d.features.row(idx);
        out.features.values.insert(out.features.values.end(), row.begin(), row.end());
        if (d.has_labels()) out.labels.push_back(d.labels[idx]);
    }
    return out;
}

void MinMaxScaler::transform_row(std::span<double> row) const {
    for (std::size_t c = 0; c < row.size(); ++c) {
        const auto& [lo, hi] = ranges[c];
        if (hi == lo) {
            row[c] = 0.0;
        } else {
            row[c] = std::clamp((row[c] - lo) / (hi - lo), 0.0, 1.0);
        }
    }
}

void MinMaxScaler::transform(Matrix& m) const {
    if (m.cols != ranges.size()) throw ShapeError("min-max scaler fitted on a different column count");
    for (std::size_t r = 0; r < m.rows; ++r) transform_row(m.row(r));
}

std::pair<Dataset, MinMaxScaler> minmax_fit_transform(const Dataset& d) {
    if (d.size() == 0) throw DataError("min-max scaling requires at least one row");
    MinMaxScaler scaler;
    scaler.ranges.resize(d.feature_count());
    for (std::size_t c = 0; c < d.feature_count(); ++c) {
        double lo = d.features.at(0, c), hi = lo;
        for (std::size_t r = 1; r < d.size(); ++r) {
            lo = std::min(lo, d.features.at(r, c));
            hi = std::max(hi, d.features.at(r, c));
        }
        scaler.ranges[c] = {lo, hi};
    }
    Dataset out = d;
    scaler.transform(out.features);
    return {std::move(out), std::move(scaler)};
}

void StandardScaler::transform_row(std::span<double> row) const {
    for (std::size_t c = 0; c < row.size(); ++c) {
        const auto& [mean, sd] = moments[c];
        row[c] = sd == 0.0 ? 0.0 : (row[c] - mean) / sd;
    }
}

void StandardScaler::transform(Matrix& m) const {
    if (m.cols != moments.size()) throw ShapeError("standard scaler fitted on a different column count");
    for (std::size_t r = 0; r < m.rows; ++r) transform_row(m.row(r));
}

std::pair<Dataset, StandardScaler> standard_fit_transform(const Dataset& d) {
    if (d.size() < 2) throw DataError("standard scaling requires at least two rows");
    StandardScaler scaler;
    scaler.moments.resize(d.feature_count());
    const double n = static_cast<double>(d.size());
    for (std::size_t c = 0; c < d.feature_count(); ++c) {
        // A genuinely constant column gets stddev 0 exactly, sidestepping the
        // rounding dust a two-pass variance would leave behind.
        bool constant = true;
        for (std::size_t r = 1; r < d.size() && constant; ++r) {
            constant = d.features.at(r, c) == d.features.at(0, c);
        }
        if (constant) {
            scaler.moments[c] = {d.features.at(0, c), 0.0};
            continue;
        }
        double sum = 0.0;
        for (std::size_t r = 0; r < d.size(); ++r) sum += d.features.at(r, c);
        const double mean = sum / n;
        double sq = 0.0;
        for (std::size_t r = 0; r < d.size(); ++r) {
            const double delta = d.features.at(r, c) - mean;
            sq += delta * delta;
        }
        scaler.moments[c] = {mean, std::sqrt(sq / n)};
    }
    Dataset out = d;
    scaler.transform(out.features);
    return {std::move(out), std::move(scaler)};
}

namespace {

std::size_t train_count(std::size_t n, double fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

} // namespace

SplitPlan split_fraction(const Dataset& d, double train_fraction, std::uint64_t seed,
                         bool stratified) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = d.size();
    if (n < 2) throw DataError("splitting requires at least 2 rows");

    SplitPlan plan;
    plan.seed = seed;
    const int pct = static_cast<int>(std::lround(train_fraction * 100.0));
    plan.ratio = {pct, 100 - pct};

    auto rng = make_rng(seed);
    const std::size_t target = train_count(n, train_fraction);

    if (!stratified) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        plan.train_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(target));
        plan.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(target), perm.end());
    } else {
        if (!d.has_labels()) throw DataError("stratified splitting requires labels");
        std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(d.class_count));
        for (std::size_t r = 0; r < n; ++r) {
            by_class[static_cast<std::size_t>(d.labels[r])].push_back(r);
        }
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            if (!by_class[c].empty() && by_class[c].size() < 2) {
                throw DataError("class " + std::to_string(c) +
                                " has fewer than 2 rows; use a non-stratified split");
            }
            std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
        }

        // Largest-remainder allocation keeps the total at exactly
        // floor(n * fraction) while preserving class proportions.
        std::vector<std::size_t> take(by_class.size());
        std::vector<std::pair<double, std::size_t>> remainders;
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            const double quota = static_cast<double>(by_class[c].size()) * train_fraction;
            take[c] = static_cast<std::size_t>(std::floor(quota + 1e-9));
            assigned += take[c];
            remainders.push_back({-(quota - static_cast<double>(take[c])), c});
        }
        std::sort(remainders.begin(), remainders.end());
        for (std::size_t i = 0; assigned < target && i < remainders.size(); ++i) {
            const std::size_t c = remainders[i].second;
            if (take[c] < by_class[c].size()) {
                ++take[c];
                ++assigned;
            }
        }

        for (std::size_t c = 0; c < by_class.size(); ++c) {
            for (std::size_t i = 0; i < by_class[c].size(); ++i) {
                (i < take[c] ? plan.train_indices : plan.test_indices).push_back(by_class[c][i]);
            }
        }
    }

    std::sort(plan.train_indices.begin(), plan.train_indices.end());
    std::sort(plan.test_indices.begin(), plan.test_indices.end());
    return plan;
}

SplitPlan split(const Dataset& d, std::pair<int, int> ratio, std::uint64_t seed, bool stratified) {
    if (ratio.first <= 0 || ratio.second <= 0 || ratio.first + ratio.second != 100) {
        throw ConfigError("split ratio must be two positive percentages summing to 100, got " +
                          std::to_string(ratio.first) + ":" + std::to_string(ratio.second));
    }
    SplitPlan plan = split_fraction(d, ratio.first / 100.0, seed, stratified);
    plan.ratio = ratio;
    return plan;
}

FoldPlan kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold requires k >= 2");
    if (k > d.size()) throw DataError("k-fold requires k <= row count (" + std::to_string(k) +
                                      " > " + std::to_string(d.size()) + ")");
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;

    std::vector<std::size_t> perm(d.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto rng = make_rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const std::size_t base = d.size() / k;
    const std::size_t extra = d.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        std::vector<std::size_t> fold(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                                      perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
        std::sort(fold.begin(), fold.end());
        plan.folds.push_back(std::move(fold));
        pos += len;
    }
    return plan;
}

} // namespace blendids
