#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "advids/data/csv.hpp"
#include "advids/data/dataset.hpp"
#include "advids/data/schema.hpp"

using namespace advids;
using namespace advids::data;

namespace {

std::filesystem::path write_temp(const char* name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << text;
    return path;
}

// f_cont continuous, f_bin binary, proto categorical {ICMP,TCP,UDP}
RawTable toy_table() {
    RawTable t;
    t.columns = {"f_cont", "f_bin", "proto", "Attack_type"};
    t.label_index = 3;
    t.rows = {
        {"1", "0", "TCP", "Normal"},
        {"2", "1", "UDP", "Backdoor"},
        {"3", "0", "ICMP", "Normal"},
        {"2.5", "1", "TCP", "Backdoor"},
    };
    return t;
}

Grouping toy_grouping() {
    Grouping g;
    g.exact = {{"f_cont", ColumnGroup::Application},
               {"f_bin", ColumnGroup::Application}};
    g.prefixes = {{"proto", ColumnGroup::Network}};
    return g;
}

// single-column dataset whose feature value is the row index, for identity checks
Dataset counting_dataset(const std::vector<std::uint8_t>& labels) {
    Dataset ds;
    ds.rows = labels.size();
    ds.cols = 1;
    ds.labels = labels;
    ds.features.resize(ds.rows);
    for (std::size_t r = 0; r < ds.rows; ++r)
        ds.features[r] = static_cast<double>(r) / static_cast<double>(ds.rows);
    ds.schema.columns.resize(1);
    ds.schema.columns[0].name = "x";
    ds.schema.application_count = 1;
    return ds;
}

}  // namespace

TEST_CASE("load_csv reads a small file with quoting") {
    auto path = write_temp("advids_csv_ok.csv",
                           "a,b,Attack_type\n"
                           "1,2,Normal\n"
                           "\"x,y\",4,Backdoor\n"
                           "\"he said \"\"hi\"\"\",6,Normal\r\n");
    RawTable t = load_csv(path.string(), "Attack_type");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.label_index == 2);
    CHECK(t.rows[1][0] == "x,y");
    CHECK(t.rows[2][0] == "he said \"hi\"");
    CHECK(t.label(2) == "Normal");
    std::filesystem::remove(path);
}

TEST_CASE("load_csv names the ragged row") {
    auto path = write_temp("advids_csv_ragged.csv",
                           "a,b,Attack_type\n1,2,Normal\n1,2\n");
    try {
        load_csv(path.string(), "Attack_type");
        FAIL("expected IngestionError");
    } catch (const IngestionError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("load_csv rejects a missing label column and a missing file") {
    auto path = write_temp("advids_csv_nolabel.csv", "a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(path.string(), "Attack_type"), IngestionError);
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv", "Attack_type"),
                    IngestionError);
    std::filesystem::remove(path);
}

TEST_CASE("clean removes duplicates and corrupt rows, keeps clean tables intact") {
    RawTable t = toy_table();
    t.rows.push_back(t.rows[0]);                     // duplicate
    t.rows.push_back({"oops", "0", "TCP", "Normal"}); // corrupt numeric
    t.rows.push_back({"1", "0", "TCP", ""});          // missing label
    CleanResult r = clean(t);
    CHECK(r.table.rows.size() == 4);
    CHECK(r.duplicates_removed == 1);
    CHECK(r.corrupt_removed == 2);

    CleanResult again = clean(r.table);
    CHECK(again.table.rows.size() == 4);
    CHECK(again.duplicates_removed == 0);
    CHECK(again.corrupt_removed == 0);
}

TEST_CASE("clean keeps categorical columns intact under the majority rule") {
    RawTable t = toy_table();
    CleanResult r = clean(t);  // proto is mostly non-numeric -> categorical
    CHECK(r.table.rows.size() == 4);
    CHECK(r.corrupt_removed == 0);
}

TEST_CASE("clean failing every row is fatal") {
    RawTable t = toy_table();
    for (auto& row : t.rows) row[3].clear();
    CHECK_THROWS_AS(clean(t), IngestionError);
}

TEST_CASE("fit_schema infers binary, continuous, and one-hot kinds") {
    FeatureSchema s = fit_schema(toy_table(), toy_grouping(), 5);
    REQUIRE(s.width() == 5);
    CHECK(s.application_count == 2);
    CHECK(s.network_count == 3);

    CHECK(s.columns[0].kind == ColumnKind::Continuous);
    CHECK(s.columns[0].observed_min == 1.0);
    CHECK(s.columns[0].observed_max == 3.0);
    CHECK(s.columns[1].kind == ColumnKind::Binary);

    // categories sorted lexicographically and sharing one group id
    CHECK(s.columns[2].name == "proto=ICMP");
    CHECK(s.columns[3].name == "proto=TCP");
    CHECK(s.columns[4].name == "proto=UDP");
    CHECK(s.columns[2].one_hot_group == s.columns[4].one_hot_group);
}

TEST_CASE("fit_schema reports a width mismatch with per-column detail") {
    try {
        fit_schema(toy_table(), toy_grouping(), 95);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        std::string msg = e.what();
        CHECK(msg.find("expected 95") != std::string::npos);
        CHECK(msg.find("proto -> 3") != std::string::npos);
    }
}

TEST_CASE("fit_schema requires a grouping rule for every column") {
    Grouping g;  // empty
    CHECK_THROWS_AS(fit_schema(toy_table(), g, 5), SchemaError);
}

TEST_CASE("encode scales to [0,1], one-hot encodes, clips, and counts unseen") {
    FeatureSchema s = fit_schema(toy_table(), toy_grouping(), 5);
    EncodeResult r = encode(toy_table(), s);
    const Dataset& ds = r.dataset;
    REQUIRE(ds.rows == 4);
    REQUIRE(ds.cols == 5);
    CHECK(r.clipped_values == 0);
    CHECK(r.unseen_categories == 0);

    CHECK(ds.row_ptr(0)[0] == 0.0);  // observed_min -> 0
    CHECK(ds.row_ptr(2)[0] == 1.0);  // observed_max -> 1
    // row 0 proto=TCP -> [ICMP,TCP,UDP] = [0,1,0]
    CHECK(ds.row_ptr(0)[2] == 0.0);
    CHECK(ds.row_ptr(0)[3] == 1.0);
    CHECK(ds.row_ptr(0)[4] == 0.0);
    CHECK(ds.labels[0] == class_index("Normal"));
    CHECK(ds.labels[1] == class_index("Backdoor"));

    RawTable wild = toy_table();
    wild.rows = {{"9", "1", "GRE", "Normal"}};  // out of range + unseen proto
    EncodeResult w = encode(wild, s);
    CHECK(w.clipped_values == 1);
    CHECK(w.dataset.row_ptr(0)[0] == 1.0);
    CHECK(w.unseen_categories == 1);
    CHECK(w.dataset.row_ptr(0)[2] == 0.0);
    CHECK(w.dataset.row_ptr(0)[3] == 0.0);
    CHECK(w.dataset.row_ptr(0)[4] == 0.0);
}

TEST_CASE("decode(encode(x)) recovers in-range continuous values within 1e-9") {
    RawTable t = toy_table();
    FeatureSchema s = fit_schema(t, toy_grouping(), 5);
    EncodeResult r = encode(t, s);
    for (std::size_t row = 0; row < r.dataset.rows; ++row) {
        std::vector<double> raw = decode_row(r.dataset, row);
        double orig;
        REQUIRE(parse_cell(t.rows[row][0], orig));
        CHECK(raw[0] == doctest::Approx(orig).epsilon(1e-9));
        double orig_bin;
        REQUIRE(parse_cell(t.rows[row][1], orig_bin));
        CHECK(raw[1] == orig_bin);
    }
}

TEST_CASE("encoded fit data satisfies all three validity criteria") {
    FeatureSchema s = fit_schema(toy_table(), toy_grouping(), 5);
    EncodeResult r = encode(toy_table(), s);
    for (std::size_t row = 0; row < r.dataset.rows; ++row) {
        const double* x = r.dataset.row_ptr(row);
        double one_hot_sum = 0.0;
        for (std::size_t j = 0; j < r.dataset.cols; ++j) {
            CHECK(x[j] >= 0.0);
            CHECK(x[j] <= 1.0);
            if (s.columns[j].kind == ColumnKind::Binary)
                CHECK((x[j] == 0.0 || x[j] == 1.0));
            if (s.columns[j].kind == ColumnKind::OneHot) one_hot_sum += x[j];
        }
        CHECK(one_hot_sum == 1.0);  // exactly one active indicator
    }
}

TEST_CASE("class registry is a 15-entry bijection") {
    REQUIRE(class_names().size() == kNumClasses);
    for (std::size_t i = 0; i < kNumClasses; ++i)
        CHECK(class_index(class_names()[i]) == i);
    CHECK(class_names()[0] == "Normal");
    CHECK(class_names()[13] == "MITM");
    CHECK_THROWS_AS(class_index("NotAClass"), IngestionError);
}

TEST_CASE("stratified split reproduces the reference class arithmetic") {
    // 24,862 rows of one class at fraction 0.2 -> 4,972 test / 19,890 train
    std::vector<std::uint8_t> labels(24862, 1);
    Dataset ds = counting_dataset(labels);
    SplitResult r = split_stratified(ds, 0.2, 7);
    CHECK(r.test.rows == 4972);
    CHECK(r.train.rows == 19890);
}

TEST_CASE("fraction 0.5 on 10 balanced rows of 2 classes gives 5/5") {
    std::vector<std::uint8_t> labels = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    Dataset ds = counting_dataset(labels);
    SplitResult r = split_stratified(ds, 0.5, 3);
    CHECK(r.test.rows == 5);
    CHECK(r.train.rows == 5);
    CHECK(r.test.class_count(0) >= 1);
    CHECK(r.test.class_count(1) >= 1);
    CHECK(r.train.class_count(0) >= 1);
    CHECK(r.train.class_count(1) >= 1);
}

TEST_CASE("split is a seeded deterministic partition") {
    std::vector<std::uint8_t> labels;
    for (int i = 0; i < 60; ++i) labels.push_back(static_cast<std::uint8_t>(i % 3));
    Dataset ds = counting_dataset(labels);

    SplitResult a = split_stratified(ds, 0.25, 11);
    SplitResult b = split_stratified(ds, 0.25, 11);
    CHECK(a.train.features == b.train.features);
    CHECK(a.test.features == b.test.features);
    CHECK(a.train.labels == b.train.labels);

    // partition by row identity: the feature value identifies the source row
    std::vector<double> all = a.train.features;
    all.insert(all.end(), a.test.features.begin(), a.test.features.end());
    std::sort(all.begin(), all.end());
    CHECK(all == ds.features);  // counting_dataset features are already sorted

    // per-class proportions within one row of the requested fraction
    for (std::size_t c = 0; c < 3; ++c) {
        const double want = 20 * 0.25;
        CHECK(std::fabs(static_cast<double>(a.test.class_count(c)) - want) <= 1.0);
    }
}

TEST_CASE("split rejects a single-sample class and bad fractions") {
    Dataset ds = counting_dataset({0, 0, 1});
    CHECK_THROWS_AS(split_stratified(ds, 0.5, 1), SplitError);
    Dataset ok = counting_dataset({0, 0, 1, 1});
    CHECK_THROWS_AS(split_stratified(ok, 0.0, 1), SplitError);
    CHECK_THROWS_AS(split_stratified(ok, 1.0, 1), SplitError);
}

TEST_CASE("exact-count split replays requested counts verbatim") {
    std::vector<std::uint8_t> labels(40, 0);
    for (int i = 0; i < 20; ++i) labels[static_cast<std::size_t>(2 * i)] = 1;
    Dataset ds = counting_dataset(labels);
    std::vector<std::size_t> counts(kNumClasses, 0);
    counts[0] = 7;
    counts[1] = 3;
    SplitResult r = split_stratified_exact(ds, counts, 5);
    CHECK(r.test.class_count(0) == 7);
    CHECK(r.test.class_count(1) == 3);
    CHECK(r.train.class_count(0) == 13);
    CHECK(r.train.class_count(1) == 17);

    counts[2] = 1;  // class 2 has no rows
    CHECK_THROWS_AS(split_stratified_exact(ds, counts, 5), SplitError);
}

TEST_CASE("dataset cache round-trips bit for bit and rejects damage") {
    FeatureSchema s = fit_schema(toy_table(), toy_grouping(), 5);
    Dataset ds = encode(toy_table(), s).dataset;
    auto path = std::filesystem::temp_directory_path() / "advids_cache.bin";
    save_dataset(ds, path.string());

    Dataset back = load_dataset(path.string(), s);
    CHECK(back.rows == ds.rows);
    CHECK(back.cols == ds.cols);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);

    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
    CHECK_THROWS_AS(load_dataset(path.string(), s), IngestionError);

    std::ofstream bad(path, std::ios::binary | std::ios::trunc);
    bad << "WRONGMAGICxxxxxxxxxxxxxxxx";
    bad.close();
    CHECK_THROWS_AS(load_dataset(path.string(), s), IngestionError);
    std::filesystem::remove(path);
}

TEST_CASE("schema JSON round-trip preserves every column") {
    FeatureSchema s = fit_schema(toy_table(), toy_grouping(), 5);
    FeatureSchema back = schema_from_json(schema_to_json(s));
    REQUIRE(back.width() == s.width());
    CHECK(back.application_count == s.application_count);
    CHECK(back.network_count == s.network_count);
    CHECK(back.label_column == s.label_column);
    for (std::size_t j = 0; j < s.width(); ++j) {
        CHECK(back.columns[j].name == s.columns[j].name);
        CHECK(back.columns[j].group == s.columns[j].group);
        CHECK(back.columns[j].kind == s.columns[j].kind);
        CHECK(back.columns[j].one_hot_group == s.columns[j].one_hot_group);
        CHECK(back.columns[j].observed_min == s.columns[j].observed_min);
        CHECK(back.columns[j].observed_max == s.columns[j].observed_max);
    }
    CHECK_THROWS_AS(schema_from_json("{not json"), SchemaError);
}

TEST_CASE("grouping document parses exact entries and prefixes") {
    Grouping g = grouping_from_json(R"({
        "exact": {"flow_duration": "application"},
        "prefixes": [["tcp_", "network"], ["http_", "application"]]
    })");
    CHECK(g.resolve("flow_duration") == ColumnGroup::Application);
    CHECK(g.resolve("tcp_flags") == ColumnGroup::Network);
    CHECK(g.resolve("http_uri_len") == ColumnGroup::Application);
    CHECK_THROWS_AS(g.resolve("mystery"), SchemaError);
    CHECK_THROWS_AS(grouping_from_json("{}"), ConfigError);
}
