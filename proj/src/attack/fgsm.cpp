#include "advids/attack/fgsm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "advids/data/csv.hpp"
#include "advids/numerics/losses.hpp"

namespace advids::attack {

namespace {

using data::ColumnKind;
using data::ColumnGroup;
using models::ModelKind;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// grads accumulate into `scratch`, which callers own (copy or per-thread)
Tensor gradient_with_scratch(Model& scratch, const Tensor& x, std::size_t y) {
    std::vector<models::ForwardCache> caches;
    Tensor log_probs = models::model_forward(scratch, x, &caches);
    auto loss = numerics::cross_entropy_loss(log_probs, y);
    models::zero_grads(scratch);
    Tensor gx = models::model_backward(scratch, caches, loss.grad);
    gx.shape = {gx.numel()};
    return gx;
}

AdversarialExample fgsm_with_scratch(Model& scratch, const Tensor& x,
                                     std::size_t y, const AttackConfig& config) {
    AdversarialExample ex;
    ex.original = x;
    ex.true_label = y;
    ex.clean_pred = models::predict(scratch, x).label;

    Tensor g = gradient_with_scratch(scratch, x, y);
    ex.delta = Tensor::zeros({x.numel()});
    ex.perturbed = x;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        ex.delta.data[i] = config.epsilon * sign(g.data[i]);
        ex.perturbed.data[i] = x.data[i] + ex.delta.data[i];
        if (config.clip_to_unit) {
            ex.perturbed.data[i] =
                std::min(1.0, std::max(0.0, ex.perturbed.data[i]));
            ex.delta.data[i] = ex.perturbed.data[i] - x.data[i];
        }
    }
    ex.adv_pred = models::predict(scratch, ex.perturbed).label;
    ex.success = ex.adv_pred != ex.true_label;
    return ex;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct GroupAccum {
    double sum_count = 0, max_count = 0;
    double sum_sq = 0, max_sq = 0;
    double sum_l2 = 0, max_l2 = 0;
    double sum_linf = 0, max_linf = 0;

    void add(double count, double sq, double linf) {
        sum_count += count;
        max_count = std::max(max_count, count);
        sum_sq += sq;
        max_sq = std::max(max_sq, sq);
        const double l2 = std::sqrt(sq);
        sum_l2 += l2;
        max_l2 = std::max(max_l2, l2);
        sum_linf += linf;
        max_linf = std::max(max_linf, linf);
    }

    GroupStats finish(double n) const {
        return {sum_count / n, max_count, sum_sq / n, max_sq,
                sum_l2 / n,    max_l2,    sum_linf / n, max_linf};
    }
};

// validity over arbitrary row vectors; counts violations per criterion/group
ValidityReport validity_over_rows(const std::vector<const double*>& rows,
                                  const FeatureSchema& schema) {
    struct Counts {
        std::size_t range = 0, binary = 0, belonging = 0;
    } app, net;

    // one-hot groups with their member columns and owning side
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < schema.width(); ++j)
        if (schema.columns[j].kind == ColumnKind::OneHot)
            groups[schema.columns[j].one_hot_group].push_back(j);

    for (const double* x : rows) {
        bool range_bad[2] = {false, false};
        bool binary_bad[2] = {false, false};
        bool belong_bad[2] = {false, false};
        for (std::size_t j = 0; j < schema.width(); ++j) {
            const auto& col = schema.columns[j];
            const int side = col.group == ColumnGroup::Application ? 0 : 1;
            if (x[j] < 0.0 || x[j] > 1.0) range_bad[side] = true;
            if (col.kind == ColumnKind::Binary && x[j] != 0.0 && x[j] != 1.0)
                binary_bad[side] = true;
        }
        for (const auto& [gid, members] : groups) {
            const int side =
                schema.columns[members[0]].group == ColumnGroup::Application ? 0
                                                                             : 1;
            std::size_t ones = 0;
            bool clean = true;
            for (std::size_t j : members) {
                if (x[j] == 1.0)
                    ++ones;
                else if (x[j] != 0.0)
                    clean = false;
            }
            if (!(clean && ones == 1)) belong_bad[side] = true;
        }
        app.range += range_bad[0];
        net.range += range_bad[1];
        app.binary += binary_bad[0];
        net.binary += binary_bad[1];
        app.belonging += belong_bad[0];
        net.belonging += belong_bad[1];
    }

    const double n = static_cast<double>(rows.size());
    ValidityReport r;
    r.application = {100.0 * app.range / n, 100.0 * app.binary / n,
                     100.0 * app.belonging / n};
    r.network = {100.0 * net.range / n, 100.0 * net.binary / n,
                 100.0 * net.belonging / n};
    return r;
}

void require_width(std::size_t got, const FeatureSchema& schema,
                   const std::string& who) {
    if (got != schema.width())
        throw DimensionError(who + ": vector width " + std::to_string(got) +
                             " does not match schema width " +
                             std::to_string(schema.width()));
}

nlohmann::json group_stats_json(const GroupStats& g) {
    return {{"mean_perturbed_count", g.mean_perturbed_count},
            {"max_perturbed_count", g.max_perturbed_count},
            {"mean_sq_distance", g.mean_sq_distance},
            {"max_sq_distance", g.max_sq_distance},
            {"mean_l2", g.mean_l2},
            {"max_l2", g.max_l2},
            {"mean_linf", g.mean_linf},
            {"max_linf", g.max_linf}};
}

nlohmann::json validity_json(const GroupValidity& v) {
    return {{"pct_invalid_range", v.pct_invalid_range},
            {"pct_invalid_binary", v.pct_invalid_binary},
            {"pct_invalid_class_belonging", v.pct_invalid_class_belonging}};
}

}  // namespace

void validate_config(const AttackConfig& config) {
    if (config.epsilon < 0.0 || config.epsilon > 1.0)
        throw ConfigError("epsilon must lie in [0,1], got " +
                          std::to_string(config.epsilon));
}

Tensor input_gradient(const Model& model, const Tensor& x, std::size_t y) {
    if (model.kind != ModelKind::Classifier)
        throw UsageError("input_gradient requires a classifier model");
    Model scratch = model;
    return gradient_with_scratch(scratch, x, y);
}

AdversarialExample fgsm_generate(const Model& model, const Tensor& x,
                                 std::size_t y, const AttackConfig& config) {
    validate_config(config);
    Model scratch = model;
    return fgsm_with_scratch(scratch, x, y, config);
}

AttackResult attack_batch(const Model& model, const Dataset& dataset,
                          const AttackConfig& config) {
    validate_config(config);
    if (dataset.rows == 0) throw UsageError("attack_batch on an empty dataset");
    if (model.input_width != dataset.cols)
        throw DimensionError("model expects width " +
                             std::to_string(model.input_width) +
                             ", dataset has " + std::to_string(dataset.cols));

    AttackResult out;
    std::vector<AdversarialExample> all(dataset.rows);
#pragma omp parallel
    {
        Model scratch = model;
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(dataset.rows);
             ++r) {
            const std::size_t row = static_cast<std::size_t>(r);
            all[row] = fgsm_with_scratch(scratch, dataset.row(row),
                                         dataset.labels[row], config);
        }
    }

    AttackSummary& s = out.summary;
    s.total = all.size();
    for (const AdversarialExample& ex : all) {
        s.successes += ex.success;
        s.clean_accuracy += ex.clean_pred == ex.true_label;
        s.adversarial_accuracy += ex.adv_pred == ex.true_label;
    }
    s.clean_accuracy /= static_cast<double>(s.total);
    s.adversarial_accuracy /= static_cast<double>(s.total);
    s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.total);

    if (config.filter_successful) {
        for (AdversarialExample& ex : all)
            if (ex.success) out.examples.push_back(std::move(ex));
    } else {
        out.examples = std::move(all);
    }
    return out;
}

PerturbationStats perturbation_stats(const std::vector<AdversarialExample>& examples,
                                     const FeatureSchema& schema) {
    if (examples.empty())
        throw StatsError("perturbation stats need at least one example");

    GroupAccum app, net;
    for (const AdversarialExample& ex : examples) {
        require_width(ex.original.numel(), schema, "perturbation_stats");
        require_width(ex.delta.numel(), schema, "perturbation_stats");
        double count[2] = {0, 0}, sq[2] = {0, 0}, linf[2] = {0, 0};
        for (std::size_t j = 0; j < schema.width(); ++j) {
            const int side =
                schema.columns[j].group == ColumnGroup::Application ? 0 : 1;
            const double d = ex.delta.data[j];
            if (d != 0.0) count[side] += 1.0;
            sq[side] += d * d;
            linf[side] = std::max(linf[side], std::fabs(d));
        }
        app.add(count[0], sq[0], linf[0]);
        net.add(count[1], sq[1], linf[1]);
    }
    const double n = static_cast<double>(examples.size());
    return {app.finish(n), net.finish(n)};
}

ValidityReport validity_analysis(const std::vector<AdversarialExample>& examples,
                                 const FeatureSchema& schema) {
    if (examples.empty())
        throw StatsError("validity analysis needs at least one example");
    std::vector<const double*> rows;
    rows.reserve(examples.size());
    for (const AdversarialExample& ex : examples) {
        require_width(ex.perturbed.numel(), schema, "validity_analysis");
        rows.push_back(ex.perturbed.data.data());
    }
    return validity_over_rows(rows, schema);
}

ValidityReport validity_analysis(const Dataset& dataset) {
    if (dataset.rows == 0)
        throw StatsError("validity analysis needs at least one row");
    std::vector<const double*> rows;
    rows.reserve(dataset.rows);
    for (std::size_t r = 0; r < dataset.rows; ++r)
        rows.push_back(dataset.row_ptr(r));
    return validity_over_rows(rows, dataset.schema);
}

void save_adversarial_csv(const std::vector<AdversarialExample>& examples,
                          const FeatureSchema& schema, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IngestionError("cannot open '" + path + "' for writing");

    for (const auto& col : schema.columns) os << csv_escape("orig_" + col.name) << ',';
    for (const auto& col : schema.columns) os << csv_escape("adv_" + col.name) << ',';
    os << "true_label,clean_pred,adv_pred,success\n";

    const auto& names = data::class_names();
    for (const AdversarialExample& ex : examples) {
        require_width(ex.original.numel(), schema, "save_adversarial_csv");
        for (double v : ex.original.data) os << fmt_double(v) << ',';
        for (double v : ex.perturbed.data) os << fmt_double(v) << ',';
        os << names.at(ex.true_label) << ',' << names.at(ex.clean_pred) << ','
           << names.at(ex.adv_pred) << ',' << (ex.success ? 1 : 0) << '\n';
    }
    if (!os) throw IngestionError("write to '" + path + "' failed");
}

std::vector<AdversarialExample> load_adversarial_csv(const std::string& path,
                                                     const FeatureSchema& schema) {
    data::RawTable t = data::load_csv(path, "true_label");
    const std::size_t w = schema.width();
    if (t.columns.size() != 2 * w + 4)
        throw IngestionError("'" + path + "' has " +
                             std::to_string(t.columns.size()) +
                             " columns, expected " + std::to_string(2 * w + 4));
    for (std::size_t j = 0; j < w; ++j) {
        if (t.columns[j] != "orig_" + schema.columns[j].name ||
            t.columns[w + j] != "adv_" + schema.columns[j].name)
            throw IngestionError("'" + path +
                                 "' column layout does not match the schema at '" +
                                 t.columns[j] + "'");
    }

    std::vector<AdversarialExample> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        AdversarialExample ex;
        ex.original = Tensor::zeros({w});
        ex.perturbed = Tensor::zeros({w});
        ex.delta = Tensor::zeros({w});
        for (std::size_t j = 0; j < w; ++j) {
            if (!data::parse_cell(row[j], ex.original.data[j]) ||
                !data::parse_cell(row[w + j], ex.perturbed.data[j]))
                throw IngestionError("row " + std::to_string(r) +
                                     ": non-numeric feature cell");
            ex.delta.data[j] = ex.perturbed.data[j] - ex.original.data[j];
        }
        ex.true_label = data::class_index(row[2 * w]);
        ex.clean_pred = data::class_index(row[2 * w + 1]);
        ex.adv_pred = data::class_index(row[2 * w + 2]);
        ex.success = row[2 * w + 3] == "1";
        out.push_back(std::move(ex));
    }
    return out;
}

std::string attack_report_json(const AttackConfig& config,
                               const AttackSummary& summary,
                               const PerturbationStats& stats,
                               const ValidityReport& validity) {
    nlohmann::json doc;
    doc["config"] = {{"epsilon", config.epsilon},
                     {"filter_successful", config.filter_successful},
                     {"clip_to_unit", config.clip_to_unit}};
    doc["summary"] = {{"total", summary.total},
                      {"successes", summary.successes},
                      {"clean_accuracy", summary.clean_accuracy},
                      {"adversarial_accuracy", summary.adversarial_accuracy},
                      {"success_rate", summary.success_rate}};
    doc["perturbation"] = {{"application", group_stats_json(stats.application)},
                           {"network", group_stats_json(stats.network)}};
    doc["validity"] = {{"application", validity_json(validity.application)},
                       {"network", validity_json(validity.network)}};
    return doc.dump(2);
}

}  // namespace advids::attack
