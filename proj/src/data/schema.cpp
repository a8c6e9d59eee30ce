#include "advids/data/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace advids::data {

namespace {

using nlohmann::json;

ColumnGroup group_from_name(const std::string& s) {
    if (s == "application") return ColumnGroup::Application;
    if (s == "network") return ColumnGroup::Network;
    throw SchemaError("unknown column group '" + s + "'");
}

ColumnKind kind_from_name(const std::string& s) {
    if (s == "continuous") return ColumnKind::Continuous;
    if (s == "binary") return ColumnKind::Binary;
    if (s == "one_hot") return ColumnKind::OneHot;
    throw SchemaError("unknown column kind '" + s + "'");
}

}  // namespace

const std::vector<std::string>& class_names() {
    static const std::vector<std::string> names = {
        "Normal",        "Backdoor",     "Vulnerability_scanner",
        "DDoS_ICMP",     "Password",     "Port_Scanning",
        "DDoS_UDP",      "Uploading",    "DDoS_HTTP",
        "SQL_injection", "Ransomware",   "DDoS_TCP",
        "XSS",           "MITM",         "Fingerprinting"};
    return names;
}

std::size_t class_index(const std::string& name) {
    const auto& names = class_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw IngestionError("unknown class label '" + name + "'");
}

std::string group_name(ColumnGroup g) {
    return g == ColumnGroup::Application ? "application" : "network";
}

std::string kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::Continuous: return "continuous";
        case ColumnKind::Binary: return "binary";
        case ColumnKind::OneHot: return "one_hot";
    }
    throw UsageError("unknown column kind");
}

ColumnGroup Grouping::resolve(const std::string& column) const {
    auto it = exact.find(column);
    if (it != exact.end()) return it->second;
    for (const auto& [prefix, group] : prefixes)
        if (column.rfind(prefix, 0) == 0) return group;
    throw SchemaError("no application/network grouping rule for column '" +
                      column + "'");
}

Grouping grouping_from_json(const std::string& text) {
    Grouping g;
    json doc;
    try {
        doc = json::parse(text);
        for (auto it = doc.at("exact").begin(); it != doc.at("exact").end(); ++it)
            g.exact[it.key()] = group_from_name(it.value().get<std::string>());
        for (const auto& entry : doc.at("prefixes"))
            g.prefixes.emplace_back(entry.at(0).get<std::string>(),
                                    group_from_name(entry.at(1).get<std::string>()));
    } catch (const json::exception& e) {
        throw ConfigError("bad grouping document: " + std::string(e.what()));
    }
    return g;
}

Grouping load_grouping(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open grouping file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return grouping_from_json(ss.str());
}

FeatureSchema fit_schema(const RawTable& train_rows, const Grouping& grouping,
                         std::size_t expected_width) {
    if (train_rows.rows.empty()) throw SchemaError("cannot fit a schema on zero rows");

    FeatureSchema schema;
    schema.label_column = train_rows.label_column();
    std::size_t next_group = 0;
    std::vector<std::pair<std::string, std::size_t>> widths;  // per raw column

    for (std::size_t c = 0; c < train_rows.columns.size(); ++c) {
        if (c == train_rows.label_index) continue;
        const std::string& col = train_rows.columns[c];
        const ColumnGroup group = grouping.resolve(col);

        bool all_numeric = true;
        bool all_01 = true;
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const auto& row : train_rows.rows) {
            double v;
            if (!parse_cell(row[c], v)) {
                all_numeric = false;
                break;
            }
            if (v != 0.0 && v != 1.0) all_01 = false;
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }

        if (all_numeric) {
            ColumnSpec spec;
            spec.name = col;
            spec.source_column = col;
            spec.group = group;
            spec.kind = all_01 ? ColumnKind::Binary : ColumnKind::Continuous;
            spec.observed_min = lo;
            spec.observed_max = hi;
            schema.columns.push_back(spec);
            widths.emplace_back(col, 1);
        } else {
            std::set<std::string> categories;
            for (const auto& row : train_rows.rows) categories.insert(row[c]);
            if (categories.size() < 2)
                throw SchemaError("categorical column '" + col +
                                  "' has a single category on fit data");
            const std::size_t gid = next_group++;
            for (const std::string& cat : categories) {
                ColumnSpec spec;
                spec.name = col + "=" + cat;
                spec.source_column = col;
                spec.category = cat;
                spec.group = group;
                spec.kind = ColumnKind::OneHot;
                spec.one_hot_group = gid;
                spec.observed_min = 0.0;
                spec.observed_max = 1.0;
                schema.columns.push_back(spec);
            }
            widths.emplace_back(col, categories.size());
        }
    }

    for (const ColumnSpec& spec : schema.columns)
        (spec.group == ColumnGroup::Application ? schema.application_count
                                                : schema.network_count)++;

    if (schema.width() != expected_width) {
        std::string detail;
        for (const auto& [col, w] : widths)
            detail += "\n  " + col + " -> " + std::to_string(w);
        throw SchemaError("encoded width is " + std::to_string(schema.width()) +
                          ", expected " + std::to_string(expected_width) +
                          "; per-column widths:" + detail);
    }
    return schema;
}

std::string schema_to_json(const FeatureSchema& schema) {
    json doc;
    doc["version"] = 1;
    doc["label_column"] = schema.label_column;
    doc["application_count"] = schema.application_count;
    doc["network_count"] = schema.network_count;
    doc["columns"] = json::array();
    for (const ColumnSpec& c : schema.columns) {
        json col;
        col["name"] = c.name;
        col["group"] = group_name(c.group);
        col["kind"] = kind_name(c.kind);
        col["source_column"] = c.source_column;
        if (c.kind == ColumnKind::OneHot) {
            col["one_hot_group"] = c.one_hot_group;
            col["category"] = c.category;
        }
        col["observed_min"] = c.observed_min;
        col["observed_max"] = c.observed_max;
        doc["columns"].push_back(col);
    }
    return doc.dump(2);
}

FeatureSchema schema_from_json(const std::string& text) {
    FeatureSchema schema;
    try {
        json doc = json::parse(text);
        if (doc.at("version").get<int>() != 1)
            throw SchemaError("unsupported schema version");
        schema.label_column = doc.at("label_column").get<std::string>();
        schema.application_count = doc.at("application_count").get<std::size_t>();
        schema.network_count = doc.at("network_count").get<std::size_t>();
        for (const json& col : doc.at("columns")) {
            ColumnSpec c;
            c.name = col.at("name").get<std::string>();
            c.group = group_from_name(col.at("group").get<std::string>());
            c.kind = kind_from_name(col.at("kind").get<std::string>());
            c.source_column = col.at("source_column").get<std::string>();
            if (c.kind == ColumnKind::OneHot) {
                c.one_hot_group = col.at("one_hot_group").get<std::size_t>();
                c.category = col.at("category").get<std::string>();
            }
            c.observed_min = col.at("observed_min").get<double>();
            c.observed_max = col.at("observed_max").get<double>();
            if (c.observed_min > c.observed_max)
                throw SchemaError("column '" + c.name + "' has min > max");
            schema.columns.push_back(c);
        }
    } catch (const json::exception& e) {
        throw SchemaError("bad schema document: " + std::string(e.what()));
    }
    if (schema.application_count + schema.network_count != schema.width())
        throw SchemaError("schema group counts do not sum to the column count");
    return schema;
}

void save_schema(const FeatureSchema& schema, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw SchemaError("cannot open '" + path + "' for writing");
    os << schema_to_json(schema) << '\n';
    if (!os) throw SchemaError("write to '" + path + "' failed");
}

FeatureSchema load_schema(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw SchemaError("cannot open schema file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return schema_from_json(ss.str());
}

}  // namespace advids::data
