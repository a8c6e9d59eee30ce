#pragma once

#include <cstdint>

#include "advids/data/schema.hpp"
#include "advids/numerics/tensor.hpp"

namespace advids::data {

using numerics::Tensor;

// Encoded, scaled feature matrix with class labels. Immutable by convention
// once built; every feature value lies in [0,1].
struct Dataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> features;  // row-major rows×cols
    std::vector<std::uint8_t> labels;
    FeatureSchema schema;

    const double* row_ptr(std::size_t r) const { return features.data() + r * cols; }
    Tensor row(std::size_t r) const;
    std::size_t class_count(std::size_t cls) const;
};

struct EncodeResult {
    Dataset dataset;
    std::size_t clipped_values = 0;
    std::size_t unseen_categories = 0;
};

// One-hot expansion plus min-max scaling; out-of-fit-range values clip to
// [0,1], unseen categories encode as all-zeros. Both cases are counted.
EncodeResult encode(const RawTable& table, const FeatureSchema& schema);

// Inverse transform of one row back to raw numeric values (continuous columns
// unscaled; binary and one-hot pass through).
std::vector<double> decode_row(const Dataset& ds, std::size_t row);

struct SplitResult {
    Dataset train;
    Dataset test;
};

// Seeded stratified split: per class, round(count × test_fraction) rows go to
// test; row order within each side follows the input.
SplitResult split_stratified(const Dataset& ds, double test_fraction,
                             std::uint64_t seed);

// Exact-count replay: test_counts[c] rows of class c go to test.
SplitResult split_stratified_exact(const Dataset& ds,
                                   const std::vector<std::size_t>& test_counts,
                                   std::uint64_t seed);

// Binary cache: magic "AIDS1", u64 row count, u32 column count, row-major
// little-endian f64 features, then one u8 label per row.
inline constexpr char kDatasetMagic[5] = {'A', 'I', 'D', 'S', '1'};

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path, const FeatureSchema& schema);

}  // namespace advids::data
