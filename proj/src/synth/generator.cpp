#include "advids/synth/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "advids/errors.hpp"
#include "advids/numerics/rng.hpp"

namespace advids::synth {

namespace {

using data::ColumnGroup;
using numerics::Rng;

void add_numbered(std::vector<RawColumn>& cols, const std::string& stem,
                  std::size_t count, ColumnGroup group, RawKind kind) {
    for (std::size_t i = 0; i < count; ++i) {
        char suffix[8];
        std::snprintf(suffix, sizeof suffix, "%02zu", i);
        cols.push_back({stem + suffix, group, kind, {}});
    }
}

std::vector<RawColumn> build_columns() {
    std::vector<RawColumn> cols;
    const ColumnGroup app = ColumnGroup::Application;
    const ColumnGroup net = ColumnGroup::Network;

    // Network layer: 10 signal + 6 zero-inflated + 2 binary = 18 columns.
    cols.push_back({"arp.count", net, RawKind::ZeroInflated, {}});
    add_numbered(cols, "icmp.zi", 3, net, RawKind::ZeroInflated);
    add_numbered(cols, "ip.zi", 2, net, RawKind::ZeroInflated);
    add_numbered(cols, "tcp.sig", 6, net, RawKind::Signal);
    cols.push_back({"tcp.connection.syn", net, RawKind::Binary, {}});
    cols.push_back({"tcp.connection.rst", net, RawKind::Binary, {}});
    add_numbered(cols, "udp.sig", 4, net, RawKind::Signal);

    // Application layer: 48 signal + 20 zero-inflated + 3 binary +
    // 2 three-way categorical = 73 columns (77 after one-hot).
    add_numbered(cols, "http.sig", 16, app, RawKind::Signal);
    add_numbered(cols, "http.zi", 5, app, RawKind::ZeroInflated);
    cols.push_back({"http.response", app, RawKind::Binary, {}});
    cols.push_back(
        {"http.request.method", app, RawKind::Categorical, {"GET", "POST", "PUT"}});
    add_numbered(cols, "dns.sig", 16, app, RawKind::Signal);
    add_numbered(cols, "dns.zi", 5, app, RawKind::ZeroInflated);
    cols.push_back({"dns.retransmission", app, RawKind::Binary, {}});
    add_numbered(cols, "mqtt.sig", 16, app, RawKind::Signal);
    cols.push_back({"mqtt.conflag.cleansess", app, RawKind::Binary, {}});
    cols.push_back(
        {"mqtt.protoname", app, RawKind::Categorical, {"MQIsdp", "MQTT", "none"}});
    add_numbered(cols, "mbtcp.zi", 10, app, RawKind::ZeroInflated);
    return cols;
}

// Per-column generation parameters, drawn once per sample.
struct ColumnParams {
    std::vector<std::size_t> perm;  // Signal: class -> level
    double zero_prob = 0.0;         // ZeroInflated
    double one_prob = 0.0;          // Binary
    std::vector<double> cum;        // Categorical: cumulative probabilities
};

// Compact decimal form: %.6f with trailing zeros trimmed, so exact zeros and
// ones stay "0" and "1" and parse back to the boundary values bit-exactly.
std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

void validate(const SynthConfig& c) {
    if (c.rows_per_class == 0)
        throw ConfigError("rows_per_class must be positive");
    if (c.class_step <= 0.0 || c.class_step > 0.05)
        throw ConfigError("class_step must be in (0, 0.05]");
    if (c.noise_sigma < 0.0 || c.noise_sigma > 0.1)
        throw ConfigError("noise_sigma must be in [0, 0.1]");
    if (c.burst_prob < 0.0 || c.burst_prob >= 1.0)
        throw ConfigError("burst_prob must be in [0, 1)");
}

std::vector<std::string> make_row(const std::vector<RawColumn>& cols,
                                  const std::vector<ColumnParams>& params,
                                  const SynthConfig& cfg, std::size_t cls,
                                  Rng& rng) {
    std::vector<std::string> cells;
    cells.reserve(cols.size() + 1);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const ColumnParams& p = params[j];
        switch (cols[j].kind) {
            case RawKind::Signal: {
                double v;
                if (rng.bernoulli(cfg.burst_prob)) {
                    v = rng.uniform(0.02, 0.98);
                } else {
                    const double level =
                        static_cast<double>(p.perm[cls]) - 7.0;
                    v = 0.5 + cfg.class_step * level +
                        rng.normal() * cfg.noise_sigma;
                    v = std::clamp(v, 0.02, 0.98);
                }
                cells.push_back(format_value(v));
                break;
            }
            case RawKind::ZeroInflated:
                if (rng.bernoulli(p.zero_prob))
                    cells.push_back("0");
                else
                    cells.push_back(format_value(rng.uniform(0.15, 1.0)));
                break;
            case RawKind::Binary:
                cells.push_back(rng.bernoulli(p.one_prob) ? "1" : "0");
                break;
            case RawKind::Categorical: {
                const double u = rng.uniform();
                std::size_t k = 0;
                while (k + 1 < p.cum.size() && u >= p.cum[k]) ++k;
                cells.push_back(cols[j].categories[k]);
                break;
            }
        }
    }
    cells.push_back(data::class_names()[cls]);
    return cells;
}

}  // namespace

const std::vector<RawColumn>& raw_columns() {
    static const std::vector<RawColumn> cols = build_columns();
    return cols;
}

std::string label_column() { return "Attack_type"; }

std::string sample_csv(const SynthConfig& config) {
    validate(config);
    const std::vector<RawColumn>& cols = raw_columns();
    Rng rng(config.seed);

    std::vector<ColumnParams> params(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        ColumnParams& p = params[j];
        switch (cols[j].kind) {
            case RawKind::Signal: {
                p.perm.resize(data::kNumClasses);
                std::iota(p.perm.begin(), p.perm.end(), 0);
                rng.shuffle(p.perm);
                break;
            }
            case RawKind::ZeroInflated:
                p.zero_prob = rng.uniform(0.45, 0.7);
                break;
            case RawKind::Binary:
                p.one_prob = rng.uniform(0.2, 0.8);
                break;
            case RawKind::Categorical: {
                double total = 0.0;
                std::vector<double> w(cols[j].categories.size());
                for (double& x : w) {
                    x = rng.uniform(0.2, 1.0);
                    total += x;
                }
                double acc = 0.0;
                for (double x : w) {
                    acc += x / total;
                    p.cum.push_back(acc);
                }
                break;
            }
        }
    }

    std::vector<std::vector<std::string>> rows;
    rows.reserve(data::kNumClasses * config.rows_per_class +
                 config.duplicate_rows + config.corrupt_rows);
    for (std::size_t c = 0; c < data::kNumClasses; ++c)
        for (std::size_t i = 0; i < config.rows_per_class; ++i)
            rows.push_back(make_row(cols, params, config, c, rng));

    // Exact copies of existing rows; cleaning should drop every one of them.
    const std::size_t data_rows = rows.size();
    for (std::size_t k = 0; k < config.duplicate_rows; ++k)
        rows.push_back(rows[(k + 1) * 997 % data_rows]);

    // Rows cleaning should reject: a missing label, then an unparseable cell
    // in a numeric column.
    for (std::size_t k = 0; k < config.corrupt_rows; ++k) {
        std::vector<std::string> row =
            make_row(cols, params, config, k % data::kNumClasses, rng);
        if (k % 2 == 0)
            row[cols.size()] = "";
        else
            row[0] = "corrupt";
        rows.push_back(row);
    }

    std::string out;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out += cols[j].name;
        out += ',';
    }
    out += label_column();
    out += '\n';
    for (const std::vector<std::string>& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += row[j];
        }
        out += '\n';
    }
    return out;
}

void write_sample_csv(const SynthConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << sample_csv(config);
    if (!out) throw UsageError("failed writing '" + path + "'");
}

}  // namespace advids::synth
