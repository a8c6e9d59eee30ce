#include "advids/data/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <unordered_set>

namespace advids::data {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Reads one logical CSV record (quotes may hide newlines); false at EOF.
bool read_record(std::istream& is, std::vector<std::string>& cells,
                 std::size_t& file_row, std::size_t row_of_record[1]) {
    cells.clear();
    std::string cell;
    bool in_quotes = false;
    bool any = false;
    row_of_record[0] = file_row + 1;
    int ch;
    while ((ch = is.get()) != EOF) {
        any = true;
        char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (is.peek() == '"') {
                    cell += '"';
                    is.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++file_row;
                cell += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            ++file_row;
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            cells.push_back(cell);
            return true;
        } else {
            cell += c;
        }
    }
    if (!any) return false;
    if (in_quotes)
        throw IngestionError("row " + std::to_string(row_of_record[0]) +
                             ": unterminated quoted field");
    ++file_row;
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
    return true;
}

}  // namespace

bool parse_cell(const std::string& cell, double& out) {
    const std::string t = trimmed(cell);
    if (t.empty()) return false;
    const char* begin = t.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + t.size() && std::isfinite(out);
}

RawTable load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IngestionError("cannot open '" + path + "'");

    RawTable table;
    std::size_t file_row = 0;
    std::size_t record_row[1];
    std::vector<std::string> cells;
    if (!read_record(is, cells, file_row, record_row))
        throw IngestionError("'" + path + "' is empty");
    table.columns = cells;

    auto it = std::find(table.columns.begin(), table.columns.end(), label_column);
    if (it == table.columns.end())
        throw IngestionError("'" + path + "' has no label column '" +
                             label_column + "'");
    table.label_index = static_cast<std::size_t>(it - table.columns.begin());

    while (read_record(is, cells, file_row, record_row)) {
        if (cells.size() != table.columns.size())
            throw IngestionError("row " + std::to_string(record_row[0]) + ": has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(table.columns.size()));
        table.rows.push_back(cells);
    }
    return table;
}

CleanResult clean(const RawTable& table) {
    const std::size_t n_cols = table.columns.size();
    const std::size_t n_rows = table.rows.size();

    // majority vote: a column is numeric when most of its cells parse
    std::vector<bool> numeric(n_cols, false);
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c == table.label_index) continue;
        std::size_t parsed = 0;
        double v;
        for (const auto& row : table.rows)
            if (parse_cell(row[c], v)) ++parsed;
        numeric[c] = 2 * parsed > n_rows;
    }

    CleanResult out;
    out.table.columns = table.columns;
    out.table.label_index = table.label_index;
    std::unordered_set<std::string> seen;
    for (const auto& row : table.rows) {
        bool corrupt = row[table.label_index].empty();
        double v;
        for (std::size_t c = 0; c < n_cols && !corrupt; ++c)
            if (numeric[c] && !parse_cell(row[c], v)) corrupt = true;
        if (corrupt) {
            ++out.corrupt_removed;
            continue;
        }
        std::string key;
        for (const auto& cell : row) {
            key += cell;
            key += '\x1f';
        }
        if (!seen.insert(key).second) {
            ++out.duplicates_removed;
            continue;
        }
        out.table.rows.push_back(row);
    }
    if (out.table.rows.empty())
        throw IngestionError("no rows survive cleaning (" +
                             std::to_string(out.corrupt_removed) + " corrupt, " +
                             std::to_string(out.duplicates_removed) + " duplicate)");
    return out;
}

}  // namespace advids::data
