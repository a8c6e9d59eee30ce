#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "advids/errors.hpp"

namespace advids::data {

// A parsed CSV: full rows (label column included) with uniform arity.
struct RawTable {
    std::vector<std::string> columns;
    std::size_t label_index = 0;
    std::vector<std::vector<std::string>> rows;

    const std::string& label(std::size_t row) const { return rows[row][label_index]; }
    const std::string& label_column() const { return columns[label_index]; }
};

// RFC-4180-style reader: quoted fields, doubled-quote escapes, newlines
// inside quotes, optional CRLF. Ragged rows fail with their 1-based file row.
RawTable load_csv(const std::string& path, const std::string& label_column);

struct CleanResult {
    RawTable table;
    std::size_t duplicates_removed = 0;
    std::size_t corrupt_removed = 0;
};

// Drops rows with a missing label or an unparseable cell in a numeric-majority
// column, then exact duplicates (first kept). Empty survivors are fatal.
CleanResult clean(const RawTable& table);

// Strict finite-double parse of a trimmed cell; false when anything is left over.
bool parse_cell(const std::string& cell, double& out);

}  // namespace advids::data
