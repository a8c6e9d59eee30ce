#include "advids/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "advids/bytes.hpp"
#include "advids/numerics/rng.hpp"

namespace advids::data {

using numerics::Rng;

Tensor Dataset::row(std::size_t r) const {
    Tensor t = Tensor::zeros({cols});
    std::copy(row_ptr(r), row_ptr(r) + cols, t.data.begin());
    return t;
}

std::size_t Dataset::class_count(std::size_t cls) const {
    std::size_t n = 0;
    for (std::uint8_t l : labels)
        if (l == cls) ++n;
    return n;
}

EncodeResult encode(const RawTable& table, const FeatureSchema& schema) {
    std::unordered_map<std::string, std::size_t> col_index;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        col_index[table.columns[c]] = c;

    std::vector<std::size_t> raw_idx(schema.width());
    for (std::size_t j = 0; j < schema.width(); ++j) {
        auto it = col_index.find(schema.columns[j].source_column);
        if (it == col_index.end())
            throw SchemaError("table has no column '" +
                              schema.columns[j].source_column +
                              "' required by the schema");
        raw_idx[j] = it->second;
    }

    // members of each one-hot group, for unseen-category detection
    std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < schema.width(); ++j)
        if (schema.columns[j].kind == ColumnKind::OneHot)
            groups[schema.columns[j].one_hot_group].push_back(j);

    EncodeResult out;
    Dataset& ds = out.dataset;
    ds.rows = table.rows.size();
    ds.cols = schema.width();
    ds.schema = schema;
    ds.features.assign(ds.rows * ds.cols, 0.0);
    ds.labels.resize(ds.rows);

    for (std::size_t r = 0; r < ds.rows; ++r) {
        const auto& row = table.rows[r];
        double* dst = ds.features.data() + r * ds.cols;
        for (std::size_t j = 0; j < ds.cols; ++j) {
            const ColumnSpec& spec = schema.columns[j];
            const std::string& cell = row[raw_idx[j]];
            if (spec.kind == ColumnKind::OneHot) {
                dst[j] = (cell == spec.category) ? 1.0 : 0.0;
                continue;
            }
            double v;
            if (!parse_cell(cell, v))
                throw IngestionError("row " + std::to_string(r) + ", column '" +
                                     spec.name + "': cell '" + cell +
                                     "' is not numeric");
            double scaled;
            if (spec.kind == ColumnKind::Binary) {
                scaled = v;
            } else if (spec.observed_max > spec.observed_min) {
                scaled = (v - spec.observed_min) /
                         (spec.observed_max - spec.observed_min);
            } else {
                scaled = 0.0;  // constant column
            }
            if (scaled < 0.0 || scaled > 1.0) ++out.clipped_values;
            dst[j] = std::min(1.0, std::max(0.0, scaled));
        }
        for (const auto& [gid, members] : groups) {
            bool hit = false;
            for (std::size_t j : members) hit = hit || dst[j] == 1.0;
            if (!hit) ++out.unseen_categories;
        }
        ds.labels[r] = static_cast<std::uint8_t>(class_index(table.label(r)));
    }
    return out;
}

std::vector<double> decode_row(const Dataset& ds, std::size_t row) {
    if (row >= ds.rows) throw UsageError("decode_row: row out of range");
    std::vector<double> out(ds.cols);
    const double* src = ds.row_ptr(row);
    for (std::size_t j = 0; j < ds.cols; ++j) {
        const ColumnSpec& spec = ds.schema.columns[j];
        if (spec.kind == ColumnKind::Continuous)
            out[j] = src[j] * (spec.observed_max - spec.observed_min) +
                     spec.observed_min;
        else
            out[j] = src[j];
    }
    return out;
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<bool>& pick, bool value) {
    Dataset out;
    out.cols = ds.cols;
    out.schema = ds.schema;
    for (std::size_t r = 0; r < ds.rows; ++r) {
        if (pick[r] != value) continue;
        out.features.insert(out.features.end(), ds.row_ptr(r), ds.row_ptr(r) + ds.cols);
        out.labels.push_back(ds.labels[r]);
        ++out.rows;
    }
    return out;
}

SplitResult split_by_counts(const Dataset& ds,
                            const std::vector<std::vector<std::size_t>>& per_class,
                            const std::vector<std::size_t>& test_counts,
                            std::uint64_t seed) {
    Rng rng(seed);
    std::vector<bool> to_test(ds.rows, false);
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        if (per_class[c].empty()) {
            if (test_counts[c] > 0)
                throw SplitError("class '" + class_names()[c] +
                                 "' has no rows but a requested test count");
            continue;
        }
        if (test_counts[c] > per_class[c].size())
            throw SplitError("class '" + class_names()[c] + "' has " +
                             std::to_string(per_class[c].size()) +
                             " rows, cannot place " +
                             std::to_string(test_counts[c]) + " in test");
        std::vector<std::size_t> order = per_class[c];
        rng.shuffle(order);
        for (std::size_t i = 0; i < test_counts[c]; ++i) to_test[order[i]] = true;
    }
    SplitResult out;
    out.train = take_rows(ds, to_test, false);
    out.test = take_rows(ds, to_test, true);
    return out;
}

std::vector<std::vector<std::size_t>> rows_per_class(const Dataset& ds) {
    std::vector<std::vector<std::size_t>> per_class(kNumClasses);
    for (std::size_t r = 0; r < ds.rows; ++r) {
        if (ds.labels[r] >= kNumClasses)
            throw SplitError("row " + std::to_string(r) + " has label index " +
                             std::to_string(ds.labels[r]));
        per_class[ds.labels[r]].push_back(r);
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
        if (per_class[c].size() == 1)
            throw SplitError("class '" + class_names()[c] +
                             "' has a single sample; cannot split");
    return per_class;
}

}  // namespace

SplitResult split_stratified(const Dataset& ds, double test_fraction,
                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw SplitError("test_fraction must lie strictly between 0 and 1");
    const auto per_class = rows_per_class(ds);

    // Largest-remainder apportionment: per-class floor(n·f), then the global
    // shortfall against round(N·f) goes to the largest remainders (ties to the
    // lower class index). Keeps every class within one row of n·f while the
    // overall test size matches the requested fraction.
    const std::size_t target = static_cast<std::size_t>(
        std::llround(static_cast<double>(ds.rows) * test_fraction));
    std::vector<std::size_t> test_counts(kNumClasses, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const double want = static_cast<double>(per_class[c].size()) * test_fraction;
        test_counts[c] = static_cast<std::size_t>(std::floor(want));
        assigned += test_counts[c];
        if (!per_class[c].empty())
            remainders.emplace_back(want - std::floor(want), c);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) {
                  return a.first != b.first ? a.first > b.first : a.second < b.second;
              });
    for (const auto& [rem, c] : remainders) {
        if (assigned >= target) break;
        if (test_counts[c] < per_class[c].size()) {
            ++test_counts[c];
            ++assigned;
        }
    }
    return split_by_counts(ds, per_class, test_counts, seed);
}

SplitResult split_stratified_exact(const Dataset& ds,
                                   const std::vector<std::size_t>& test_counts,
                                   std::uint64_t seed) {
    if (test_counts.size() != kNumClasses)
        throw SplitError("exact split needs one test count per class (" +
                         std::to_string(kNumClasses) + "), got " +
                         std::to_string(test_counts.size()));
    return split_by_counts(ds, rows_per_class(ds), test_counts, seed);
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IngestionError("cannot open '" + path + "' for writing");
    os.write(kDatasetMagic, 5);
    bytes::put_u64(os, ds.rows);
    bytes::put_u32(os, static_cast<std::uint32_t>(ds.cols));
    for (double v : ds.features) bytes::put_f64(os, v);
    os.write(reinterpret_cast<const char*>(ds.labels.data()),
             static_cast<std::streamsize>(ds.labels.size()));
    if (!os) throw IngestionError("write to '" + path + "' failed");
}

Dataset load_dataset(const std::string& path, const FeatureSchema& schema) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IngestionError("cannot open '" + path + "'");
    char magic[5];
    bytes::need<IngestionError>(is, magic, 5, "magic");
    if (std::memcmp(magic, kDatasetMagic, 5) != 0)
        throw IngestionError("'" + path + "' is not a dataset cache");
    Dataset ds;
    ds.rows = bytes::get_u64<IngestionError>(is, "row count");
    ds.cols = bytes::get_u32<IngestionError>(is, "column count");
    if (ds.cols != schema.width())
        throw IngestionError("cache has " + std::to_string(ds.cols) +
                             " columns, schema has " +
                             std::to_string(schema.width()));
    ds.schema = schema;
    ds.features.resize(ds.rows * ds.cols);
    for (double& v : ds.features) {
        v = bytes::get_f64<IngestionError>(is, "features");
        if (!(v >= 0.0 && v <= 1.0))
            throw IngestionError("cache feature value " + std::to_string(v) +
                                 " outside [0,1]");
    }
    ds.labels.resize(ds.rows);
    if (ds.rows > 0)
        bytes::need<IngestionError>(is, reinterpret_cast<char*>(ds.labels.data()),
                                    ds.rows, "labels");
    for (std::uint8_t l : ds.labels)
        if (l >= kNumClasses)
            throw IngestionError("cache label index " + std::to_string(l) +
                                 " out of range");
    if (is.peek() != std::ifstream::traits_type::eof())
        throw IngestionError("'" + path + "' has trailing bytes");
    return ds;
}

}  // namespace advids::data
