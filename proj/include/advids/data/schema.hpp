#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "advids/data/csv.hpp"
#include "advids/errors.hpp"

namespace advids::data {

inline constexpr std::size_t kNumClasses = 15;

// Class registry in the canonical table order; index <-> name is a bijection.
const std::vector<std::string>& class_names();
std::size_t class_index(const std::string& name);

enum class ColumnGroup { Application, Network };
enum class ColumnKind { Continuous, Binary, OneHot };

std::string group_name(ColumnGroup g);
std::string kind_name(ColumnKind k);

// One encoded feature column. One-hot members carry their source column and
// category; group_id ties members of the same categorical column together.
struct ColumnSpec {
    std::string name;
    ColumnGroup group = ColumnGroup::Application;
    ColumnKind kind = ColumnKind::Continuous;
    std::size_t one_hot_group = kNoGroup;
    std::string source_column;
    std::string category;
    double observed_min = 0.0;
    double observed_max = 0.0;

    static constexpr std::size_t kNoGroup = static_cast<std::size_t>(-1);
};

struct FeatureSchema {
    std::vector<ColumnSpec> columns;
    std::size_t application_count = 0;
    std::size_t network_count = 0;
    std::string label_column;

    std::size_t width() const { return columns.size(); }
};

// Maps raw column names to application/network; exact entries first, then
// the first matching name prefix. Unmatched columns are a schema error.
struct Grouping {
    std::map<std::string, ColumnGroup> exact;
    std::vector<std::pair<std::string, ColumnGroup>> prefixes;

    ColumnGroup resolve(const std::string& column) const;
};

Grouping grouping_from_json(const std::string& text);
Grouping load_grouping(const std::string& path);

// Infers column kinds and scaling ranges from training rows only. All-numeric
// columns become binary (values in {0,1}) or continuous; anything else becomes
// a one-hot group over its lexicographically sorted categories.
FeatureSchema fit_schema(const RawTable& train_rows, const Grouping& grouping,
                         std::size_t expected_width = 95);

std::string schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const std::string& text);
void save_schema(const FeatureSchema& schema, const std::string& path);
FeatureSchema load_schema(const std::string& path);

}  // namespace advids::data
