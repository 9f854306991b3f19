#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "blendids/dataset.hpp"
#include "blendids/errors.hpp"

#include "testutil.hpp"

using namespace blendids;
using testutil::make_dataset;
using testutil::TempDir;

namespace {

const char* kWustlHeader =
    "Source Port,Total packets,Total Bytes,Source Packets,Destination Packets,Source Bytes,Target\n";

FeatureSchema wustl_like_schema() {
    FeatureSchema schema;
    schema.name = "wustl_iiot_2018";
    for (const char* n : {"Source Port", "Total packets", "Total Bytes", "Source Packets",
                          "Destination Packets", "Source Bytes"}) {
        schema.columns.push_back({n, ColumnKind::Numeric});
    }
    schema.columns.push_back({"Target", ColumnKind::Label});
    schema.label_encoding = {{"0", 0}, {"1", 1}};
    return schema;
}

} // namespace

TEST_CASE("load_csv parses the wustl-shaped layout") {
    TempDir dir;
    const auto csv = dir.file("flows.csv", std::string(kWustlHeader) +
                                               "443,10,1200,6,4,800,0\n"
                                               "1337,99,50000,90,9,49000,1\n");
    const Dataset d = load_csv(csv, wustl_like_schema());
    CHECK(d.size() == 2);
    CHECK(d.feature_count() == 6);
    CHECK(d.class_count == 2);
    CHECK(d.features.at(0, 0) == 443.0);
    CHECK(d.features.at(1, 5) == 49000.0);
    CHECK(d.labels == std::vector<int>{0, 1});
}

TEST_CASE("load_csv accepts an empty file with a valid header") {
    TempDir dir;
    const auto csv = dir.file("empty.csv", kWustlHeader);
    const Dataset d = load_csv(csv, wustl_like_schema());
    CHECK(d.size() == 0);
    CHECK(d.feature_count() == 6);
}

TEST_CASE("load_csv rejects unparseable numeric cells with the row number") {
    TempDir dir;
    const auto csv = dir.file("bad.csv", std::string(kWustlHeader) +
                                             "443,10,1200,6,4,800,0\n"
                                             "443,abc,1200,6,4,800,0\n");
    CHECK_THROWS_WITH_AS(load_csv(csv, wustl_like_schema()),
                         doctest::Contains("row 2"), DataError);
}

TEST_CASE("load_csv names the offending header column") {
    TempDir dir;
    const auto missing = dir.file("missing.csv", "Source Port,Total packets\n");
    CHECK_THROWS_WITH_AS(load_csv(missing, wustl_like_schema()),
                         doctest::Contains("Total Bytes"), DataError);
}

TEST_CASE("load_csv rejects extra and renamed columns") {
    TempDir dir;
    const auto extra = dir.file(
        "extra.csv",
        "Source Port,Total packets,Total Bytes,Source Packets,Destination Packets,Source Bytes,"
        "Target,Bogus\n");
    CHECK_THROWS_WITH_AS(load_csv(extra, wustl_like_schema()), doctest::Contains("Bogus"),
                         DataError);

    const auto renamed = dir.file(
        "renamed.csv",
        "Source Port,Total packets,Total Bytes,Src Pkts,Destination Packets,Source Bytes,Target\n");
    CHECK_THROWS_WITH_AS(load_csv(renamed, wustl_like_schema()),
                         doctest::Contains("Source Packets"), DataError);
}

TEST_CASE("load_csv rejects labels outside the schema encoding") {
    TempDir dir;
    const auto csv = dir.file("bad_label.csv", std::string(kWustlHeader) +
                                                   "443,10,1200,6,4,800,2\n");
    CHECK_THROWS_WITH_AS(load_csv(csv, wustl_like_schema()), doctest::Contains("'2'"), DataError);
}

TEST_CASE("load_csv dictionary-encodes categorical columns lexicographically") {
    FeatureSchema schema;
    schema.name = "cat";
    schema.columns = {{"proto", ColumnKind::Categorical},
                      {"bytes", ColumnKind::Numeric},
                      {"y", ColumnKind::Label}};
    schema.label_encoding = {{"0", 0}, {"1", 1}};

    TempDir dir;
    const auto csv = dir.file("cat.csv",
                              "proto,bytes,y\n"
                              "tcp,10,0\n"
                              "udp,20,1\n"
                              "icmp,30,0\n"
                              "tcp,40,1\n");
    const Dataset d = load_csv(csv, schema);
    // icmp < tcp < udp
    CHECK(d.features.at(0, 0) == 1.0);
    CHECK(d.features.at(1, 0) == 2.0);
    CHECK(d.features.at(2, 0) == 0.0);
    CHECK(d.features.at(3, 0) == 1.0);
    CHECK(d.categorical_encodings.at("proto").at("icmp") == 0);

    // replaying with the stored dictionaries must reject unseen values
    const auto unseen = dir.file("unseen.csv", "proto,bytes,y\nsctp,5,0\n");
    LoadOptions options;
    options.fixed_dicts = &d.categorical_encodings;
    CHECK_THROWS_WITH_AS(load_csv(unseen, schema, options), doctest::Contains("sctp"), DataError);
}

TEST_CASE("load_csv handles quoted fields with commas, escaped quotes and newlines") {
    FeatureSchema schema;
    schema.name = "quoted";
    schema.columns = {{"tag", ColumnKind::Categorical},
                      {"x", ColumnKind::Numeric},
                      {"y", ColumnKind::Label}};
    schema.label_encoding = {{"0", 0}, {"1", 1}};

    TempDir dir;
    const auto csv = dir.file("quoted.csv",
                              "tag,x,y\n"
                              "\"a,b\",1,0\n"
                              "\"say \"\"hi\"\"\",2,1\n"
                              "\"line\nbreak\",3,0\r\n"
                              "plain,4,1\n");
    const Dataset d = load_csv(csv, schema);
    REQUIRE(d.size() == 4);
    const auto& dict = d.categorical_encodings.at("tag");
    CHECK(dict.contains("a,b"));
    CHECK(dict.contains("say \"hi\""));
    CHECK(dict.contains("line\nbreak"));
    CHECK(dict.contains("plain"));
    CHECK(d.features.at(3, 1) == 4.0);
}

TEST_CASE("load_csv infers a lexicographic label encoding when the schema has none") {
    FeatureSchema schema;
    schema.name = "infer";
    schema.columns = {{"x", ColumnKind::Numeric}, {"cls", ColumnKind::Label}};

    TempDir dir;
    const auto csv = dir.file("infer.csv", "x,cls\n1,normal\n2,attack\n3,normal\n");
    const Dataset d = load_csv(csv, schema);
    CHECK(d.class_count == 2);
    CHECK(d.schema.label_encoding.at("attack") == 0);
    CHECK(d.schema.label_encoding.at("normal") == 1);
    CHECK(d.labels == std::vector<int>{1, 0, 1});
}

TEST_CASE("load_csv can omit the label column for predict-time data") {
    TempDir dir;
    const auto csv = dir.file(
        "nolabel.csv",
        "Source Port,Total packets,Total Bytes,Source Packets,Destination Packets,Source Bytes\n"
        "443,10,1200,6,4,800\n");
    LoadOptions options;
    options.require_label = false;
    const Dataset d = load_csv(csv, wustl_like_schema(), options);
    CHECK(d.size() == 1);
    CHECK_FALSE(d.has_labels());
}

TEST_CASE("missing markers survive load as NaN and clean drops them") {
    TempDir dir;
    const auto csv = dir.file("gaps.csv", std::string(kWustlHeader) +
                                              "443,10,1200,6,4,800,0\n"
                                              "443,,1200,6,4,800,0\n"
                                              "443,NaN,1200,6,4,800,1\n"
                                              "443,null,1200,6,4,800,1\n"
                                              "80,1,100,1,0,60,NaN\n"
                                              "8080,2,300,2,0,200,1\n");
    const Dataset d = load_csv(csv, wustl_like_schema());
    CHECK(d.size() == 6);
    CHECK(std::isnan(d.features.at(1, 1)));
    CHECK(d.labels[4] == -1);

    const Dataset cleaned = clean(d);
    CHECK(cleaned.size() == 2);
    CHECK(cleaned.features.at(1, 0) == 8080.0);
}

TEST_CASE("clean collapses exact duplicates to the first occurrence") {
    // rows 2 and 4 (1-based) identical
    const Dataset d = make_dataset(
        {{1, 1}, {2, 2}, {3, 3}, {2, 2}, {5, 5}}, {0, 1, 0, 1, 1});
    const Dataset cleaned = clean(d);

    // brute-force duplicate scan as the oracle
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bool dup = false;
        for (std::size_t j = 0; j < i && !dup; ++j) {
            dup = d.labels[i] == d.labels[j] &&
                  std::equal(d.features.row(i).begin(), d.features.row(i).end(),
                             d.features.row(j).begin());
        }
        if (!dup) survivors.push_back(i);
    }
    REQUIRE(survivors.size() == 4);
    REQUIRE(cleaned.size() == 4);
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        CHECK(std::equal(cleaned.features.row(i).begin(), cleaned.features.row(i).end(),
                         d.features.row(survivors[i]).begin()));
        CHECK(cleaned.labels[i] == d.labels[survivors[i]]);
    }
}

TEST_CASE("clean reduces an all-identical dataset to one row") {
    const Dataset d = make_dataset({{7, 8}, {7, 8}, {7, 8}}, {1, 1, 1});
    CHECK(clean(d).size() == 1);
}

TEST_CASE("cleaning away every row yields an empty dataset, not an error") {
    Dataset d = make_dataset({{1, 2}, {3, 4}}, {0, 1});
    d.features.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
    d.features.at(1, 1) = std::numeric_limits<double>::infinity();
    const Dataset cleaned = clean(d);
    CHECK(cleaned.size() == 0);
    CHECK(cleaned.feature_count() == 2);
}

TEST_CASE("clean leaves an already-clean dataset identical and is idempotent") {
    const Dataset d = make_dataset({{1, 2}, {3, 4}, {5, 6}}, {0, 1, 0});
    const Dataset once = clean(d);
    CHECK(once.features.values == d.features.values);
    CHECK(once.labels == d.labels);

    // same feature row with a different label is not a duplicate
    const Dataset mixed = make_dataset({{1, 2}, {1, 2}}, {0, 1});
    CHECK(clean(mixed).size() == 2);

    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> value(0, 2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int r = 0; r < 30; ++r) {
            rows.push_back({double(value(rng)), double(value(rng))});
            labels.push_back(value(rng) % 2);
        }
        const Dataset noisy = make_dataset(rows, labels);
        const Dataset c1 = clean(noisy);
        const Dataset c2 = clean(c1);
        CHECK(c1.features.values == c2.features.values);
        CHECK(c1.labels == c2.labels);
    }
}

TEST_CASE("min-max maps endpoints and midpoint exactly") {
    const Dataset d = make_dataset({{0}, {5}, {10}}, {0, 1, 0});
    const auto [scaled, scaler] = minmax_fit_transform(d);
    CHECK(scaled.features.at(0, 0) == 0.0);
    CHECK(scaled.features.at(1, 0) == 0.5);
    CHECK(scaled.features.at(2, 0) == 1.0);
    CHECK(scaler.ranges[0].min == 0.0);
    CHECK(scaler.ranges[0].max == 10.0);
}

TEST_CASE("min-max maps constant columns to zero") {
    const Dataset d = make_dataset({{7}, {7}, {7}}, {0, 1, 0});
    const auto [scaled, scaler] = minmax_fit_transform(d);
    for (std::size_t r = 0; r < 3; ++r) CHECK(scaled.features.at(r, 0) == 0.0);
}

TEST_CASE("min-max clamps unseen values into [0,1]") {
    const Dataset d = make_dataset({{2}, {4}}, {0, 1});
    const auto [scaled, scaler] = minmax_fit_transform(d);
    std::vector<double> row{6.0};   // (6-2)/(4-2) = 2 before clamping
    scaler.transform_row(row);
    CHECK(row[0] == 1.0);
    row = {0.0};
    scaler.transform_row(row);
    CHECK(row[0] == 0.0);
}

TEST_CASE("min-max rejects an empty dataset") {
    const Dataset d = make_dataset({}, {});
    CHECK_THROWS_AS(minmax_fit_transform(d), DataError);
}

TEST_CASE("min-max outputs stay inside [0,1] on arbitrary data") {
    std::mt19937_64 rng(404);
    std::normal_distribution<double> value(-3.0, 50.0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int r = 0; r < 150; ++r) {
        rows.push_back({value(rng), value(rng), value(rng)});
        labels.push_back(r % 2);
    }
    const auto [scaled, scaler] = minmax_fit_transform(make_dataset(rows, labels));
    for (double v : scaled.features.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("standard scaler reproduces the hand-computed column") {
    const Dataset d = make_dataset({{2}, {4}, {6}}, {0, 1, 0});
    const auto [scaled, scaler] = standard_fit_transform(d);
    // mean 4, population sigma = sqrt(8/3); (2-4)/sigma = -sqrt(1.5)
    CHECK(scaled.features.at(0, 0) == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-12));
    CHECK(scaled.features.at(1, 0) == doctest::Approx(0.0));
    CHECK(scaled.features.at(2, 0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    CHECK(scaler.moments[0].mean == doctest::Approx(4.0));
    CHECK(scaler.moments[0].stddev == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("standardizing twice changes nothing beyond float dust") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(3.0, 2.5);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int r = 0; r < 200; ++r) {
        rows.push_back({noise(rng), noise(rng) * 10});
        labels.push_back(r % 2);
    }
    const auto [once, s1] = standard_fit_transform(make_dataset(rows, labels));
    const auto [twice, s2] = standard_fit_transform(once);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(std::abs(s2.moments[c].mean) < 1e-9);
        CHECK(std::abs(s2.moments[c].stddev - 1.0) < 1e-9);
    }
}

TEST_CASE("standard scaler zeroes constant columns and needs two rows") {
    const Dataset d = make_dataset({{3, 1}, {3, 2}, {3, 3}}, {0, 1, 0});
    const auto [scaled, scaler] = standard_fit_transform(d);
    for (std::size_t r = 0; r < 3; ++r) CHECK(scaled.features.at(r, 0) == 0.0);
    CHECK(scaler.moments[0].stddev == 0.0);

    const Dataset tiny = make_dataset({{1}}, {0});
    CHECK_THROWS_AS(standard_fit_transform(tiny), DataError);
}

namespace {

Dataset grid_dataset(std::size_t n, double minority_fraction = 0.5) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    const auto minority = static_cast<std::size_t>(std::lround(n * minority_fraction));
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({double(i)});
        labels.push_back(i < n - minority ? 0 : 1);
    }
    return make_dataset(rows, labels);
}

void check_split_invariants(const SplitPlan& plan, std::size_t n) {
    std::set<std::size_t> all(plan.train_indices.begin(), plan.train_indices.end());
    for (std::size_t i : plan.test_indices) CHECK(all.insert(i).second);
    CHECK(all.size() == n);
    CHECK(*all.rbegin() == n - 1);
}

} // namespace

TEST_CASE("80:20 split of ten rows gives 8 and 2") {
    const Dataset d = grid_dataset(10);
    const SplitPlan plan = split(d, {80, 20}, 3);
    CHECK(plan.train_indices.size() == 8);
    CHECK(plan.test_indices.size() == 2);
    check_split_invariants(plan, 10);
}

TEST_CASE("splits are deterministic under the seed") {
    const Dataset d = grid_dataset(50);
    const SplitPlan a = split(d, {70, 30}, 99);
    const SplitPlan b = split(d, {70, 30}, 99);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);
    const SplitPlan c = split(d, {70, 30}, 100);
    CHECK(a.train_indices != c.train_indices);
}

TEST_CASE("stratified 80:20 split of a 94:6 mix holds 12 minority rows out") {
    const Dataset d = grid_dataset(1000, 0.06);
    const SplitPlan plan = split(d, {80, 20}, 11, /*stratified=*/true);
    std::size_t minority_test = 0;
    for (std::size_t i : plan.test_indices) minority_test += d.labels[i] == 1 ? 1 : 0;
    // stratified-count oracle: floor(60 * 0.8) = 48 stay, 12 held out
    CHECK(minority_test == 12);
    CHECK(plan.train_indices.size() == 800);
}

TEST_CASE("stratified split refuses classes with fewer than two rows") {
    const Dataset d = make_dataset({{1}, {2}, {3}}, {0, 0, 1});
    CHECK_THROWS_WITH_AS(split(d, {80, 20}, 1, true), doctest::Contains("non-stratified"),
                         DataError);
    CHECK_NOTHROW(split(d, {80, 20}, 1, false));
}

TEST_CASE("split rejects malformed ratios") {
    const Dataset d = grid_dataset(10);
    CHECK_THROWS_AS(split(d, {50, 60}, 1), ConfigError);
    CHECK_THROWS_AS(split(d, {100, 0}, 1), ConfigError);
}

TEST_CASE("split and kfold laws hold over random draws") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 200;
        const Dataset d = grid_dataset(n);
        const int train_pct = 10 + int(rng() % 81);
        const std::uint64_t seed = rng();

        const SplitPlan plan = split(d, {train_pct, 100 - train_pct}, seed, false);
        check_split_invariants(plan, n);
        const auto expected = static_cast<std::size_t>(
            std::floor(double(n) * train_pct / 100.0 + 1e-9));
        CHECK(plan.train_indices.size() == expected);
        const SplitPlan again = split(d, {train_pct, 100 - train_pct}, seed, false);
        CHECK(plan.train_indices == again.train_indices);

        const std::size_t k = 2 + rng() % std::min<std::size_t>(n - 1, 9);
        const FoldPlan folds = kfold(d, k, seed);
        std::set<std::size_t> all;
        std::size_t min_size = n, max_size = 0;
        for (const auto& fold : folds.folds) {
            for (std::size_t i : fold) CHECK(all.insert(i).second);
            min_size = std::min(min_size, fold.size());
            max_size = std::max(max_size, fold.size());
        }
        CHECK(all.size() == n);
        CHECK(max_size - min_size <= 1);
        const FoldPlan folds2 = kfold(d, k, seed);
        CHECK(folds.folds == folds2.folds);
    }
}

TEST_CASE("kfold covers the boundary cases") {
    const Dataset ten = grid_dataset(10);
    const FoldPlan five = kfold(ten, 5, 1);
    for (const auto& fold : five.folds) CHECK(fold.size() == 2);

    const Dataset seven = grid_dataset(7);
    const FoldPlan three = kfold(seven, 3, 1);
    std::multiset<std::size_t> sizes;
    for (const auto& fold : three.folds) sizes.insert(fold.size());
    CHECK(sizes == std::multiset<std::size_t>{2, 2, 3});

    const FoldPlan loo = kfold(seven, 7, 1);
    for (const auto& fold : loo.folds) CHECK(fold.size() == 1);

    CHECK_THROWS_AS(kfold(seven, 1, 1), ConfigError);
    CHECK_THROWS_AS(kfold(seven, 8, 1), DataError);
}
