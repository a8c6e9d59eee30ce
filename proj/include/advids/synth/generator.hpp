#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advids/data/schema.hpp"

namespace advids::synth {

enum class RawKind { Signal, ZeroInflated, Binary, Categorical };

// One raw capture column before encoding. Signal columns carry the class
// structure; the rest are nuisance traffic statistics.
struct RawColumn {
    std::string name;
    data::ColumnGroup group = data::ColumnGroup::Application;
    RawKind kind = RawKind::Signal;
    std::vector<std::string> categories;  // Categorical only
};

struct SynthConfig {
    std::size_t rows_per_class = 250;
    std::uint64_t seed = 7;
    // Raw-scale distance between adjacent class levels in a signal column.
    // Narrow on purpose: class clusters sit close enough that a 0.01-budget
    // sign attack crosses decision boundaries, while 15 training epochs still
    // separate them cleanly.
    double class_step = 0.0030;
    // Gaussian noise on signal columns, raw scale.
    double noise_sigma = 0.008;
    // Chance a signal cell is replaced by a wide-range burst value; bursts
    // anchor each column's observed range so min-max scaling stays stable.
    double burst_prob = 0.01;
    // Extra rows appended at the end to exercise cleaning.
    std::size_t duplicate_rows = 5;
    std::size_t corrupt_rows = 2;
};

// The fixed 91-column capture layout (label column excluded). Encodes to 95
// features: 77 application, 18 network.
const std::vector<RawColumn>& raw_columns();

// Name of the label column appended after the feature columns.
std::string label_column();

// Deterministic balanced sample: rows_per_class rows for each of the 15
// classes in registry order, then duplicate and corrupt rows to exercise
// cleaning. Returns the full CSV file contents.
std::string sample_csv(const SynthConfig& config);

void write_sample_csv(const SynthConfig& config, const std::string& path);

}  // namespace advids::synth
