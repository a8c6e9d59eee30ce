#include <cmath>
#include <filesystem>

#include "doctest.h"

#include "json.hpp"

#include "advids/attack/fgsm.hpp"
#include "advids/numerics/losses.hpp"

using namespace advids;
using namespace advids::attack;
using models::ClassifierConfig;
using models::Model;
using models::Rng;

namespace {

// f_cont + f_bin (application), proto one-hot ICMP/TCP/UDP (network)
data::FeatureSchema toy_schema() {
    data::RawTable t;
    t.columns = {"f_cont", "f_bin", "proto", "Attack_type"};
    t.label_index = 3;
    t.rows = {
        {"1", "0", "TCP", "Normal"},
        {"2", "1", "UDP", "Backdoor"},
        {"3", "0", "ICMP", "Normal"},
        {"2.5", "1", "TCP", "Backdoor"},
    };
    data::Grouping g;
    g.exact = {{"f_cont", data::ColumnGroup::Application},
               {"f_bin", data::ColumnGroup::Application}};
    g.prefixes = {{"proto", data::ColumnGroup::Network}};
    return data::fit_schema(t, g, 5);
}

data::Dataset toy_dataset() {
    data::RawTable t;
    t.columns = {"f_cont", "f_bin", "proto", "Attack_type"};
    t.label_index = 3;
    t.rows = {
        {"1", "0", "TCP", "Normal"},
        {"2", "1", "UDP", "Backdoor"},
        {"3", "0", "ICMP", "Normal"},
        {"2.5", "1", "TCP", "Backdoor"},
    };
    return data::encode(t, toy_schema()).dataset;
}

Model toy_model(std::uint64_t seed) {
    Rng rng(seed);
    return models::build_classifier({5, 3, 2, 2, 3, 1, 4, 3}, rng);
}

// single-channel trunk that forwards the input unchanged (center-tap convs,
// identity fc1); the head then realizes an exact logistic model
Model passthrough_model(double w) {
    Rng rng(1);
    Model m = models::build_classifier({2, 1, 1, 1, 3, 1, 2, 2}, rng);
    for (int conv : {0, 2, 4}) {
        m.layers[conv].params[0].data = {0.0, 1.0, 0.0};
        m.layers[conv].params[1].fill(0.0);
    }
    m.layers[6].params[0].data = {1.0, 0.0, 0.0, 1.0};  // fc1 identity
    m.layers[6].params[1].fill(0.0);
    m.layers[8].params[0].data = {w, -w, 0.0, 0.0};  // class-0 row (+w,-w)
    m.layers[8].params[1].fill(0.0);
    return m;
}

double ce_loss(const Model& m, const numerics::Tensor& x, std::size_t y) {
    return numerics::cross_entropy_loss(models::model_forward(m, x), y).loss;
}

}  // namespace

TEST_CASE("input gradient matches the hand-derived logistic formula") {
    const double w = 3.0;
    Model m = passthrough_model(w);
    numerics::Tensor x = numerics::Tensor::from({0.6, 0.4});
    // z0 = w(x0-x1), true label 1: J = log(1+e^{z0});
    // dJ/dx = (sigma(z0)*w, -sigma(z0)*w)
    const double z0 = w * (x.data[0] - x.data[1]);
    const double sig = 1.0 / (1.0 + std::exp(-z0));
    numerics::Tensor g = input_gradient(m, x, 1);
    CHECK(g.data[0] == doctest::Approx(sig * w).epsilon(1e-9));
    CHECK(g.data[1] == doctest::Approx(-sig * w).epsilon(1e-9));
}

TEST_CASE("fgsm on the logistic toy pushes (+eps,-eps) and raises the loss") {
    Model m = passthrough_model(3.0);
    numerics::Tensor x = numerics::Tensor::from({0.6, 0.4});
    AttackConfig cfg;
    cfg.epsilon = 0.05;
    AdversarialExample ex = fgsm_generate(m, x, 1, cfg);
    CHECK(ex.delta.data[0] == cfg.epsilon);
    CHECK(ex.delta.data[1] == -cfg.epsilon);
    CHECK(ce_loss(m, ex.perturbed, 1) > ce_loss(m, ex.original, 1));
}

TEST_CASE("input gradient matches central finite differences") {
    Model m = toy_model(3);
    Rng rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        numerics::Tensor x = numerics::Tensor::zeros({5});
        for (double& v : x.data) v = rng.uniform(0.1, 0.9);
        const std::size_t y = rng.index(3);
        numerics::Tensor g = input_gradient(m, x, y);
        const double h = 1e-5;
        for (std::size_t i = 0; i < 5; ++i) {
            const double keep = x.data[i];
            x.data[i] = keep + h;
            const double up = ce_loss(m, x, y);
            x.data[i] = keep - h;
            const double dn = ce_loss(m, x, y);
            x.data[i] = keep;
            const double numeric = (up - dn) / (2.0 * h);
            const double rel =
                std::fabs(g.data[i] - numeric) /
                std::max(1e-8, std::fabs(g.data[i]) + std::fabs(numeric));
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("zero first-conv weights give a zero input gradient") {
    Model m = toy_model(5);
    m.layers[0].params[0].fill(0.0);
    numerics::Tensor x = numerics::Tensor::from({0.2, 0.4, 0.6, 0.8, 0.5});
    numerics::Tensor g = input_gradient(m, x, 0);
    for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("input gradient is pure") {
    Model m = toy_model(6);
    numerics::Tensor x = numerics::Tensor::from({0.3, 0.1, 0.7, 0.9, 0.5});
    numerics::Tensor a = input_gradient(m, x, 2);
    numerics::Tensor b = input_gradient(m, x, 2);
    CHECK(a.data == b.data);
}

TEST_CASE("epsilon zero leaves the input untouched") {
    Model m = toy_model(7);
    numerics::Tensor x = numerics::Tensor::from({0.3, 0.1, 0.7, 0.9, 0.5});
    AttackConfig cfg;
    cfg.epsilon = 0.0;
    AdversarialExample ex = fgsm_generate(m, x, 1, cfg);
    CHECK(ex.perturbed.data == ex.original.data);
    CHECK(ex.adv_pred == ex.clean_pred);
    CHECK(ex.success == (ex.clean_pred != 1));
}

TEST_CASE("attack config validation") {
    AttackConfig cfg;
    cfg.epsilon = -0.1;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("fgsm deltas have the exact three-valued structure") {
    Model m = toy_model(8);
    data::Dataset ds = toy_dataset();
    AttackConfig cfg;
    cfg.epsilon = 0.01;
    cfg.filter_successful = false;
    AttackResult r = attack_batch(m, ds, cfg);
    REQUIRE(r.examples.size() == ds.rows);
    const data::FeatureSchema schema = toy_schema();

    for (const AdversarialExample& ex : r.examples) {
        double linf = 0.0;
        std::size_t count = 0;
        double sq = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const double d = ex.delta.data[i];
            CHECK((d == cfg.epsilon || d == -cfg.epsilon || d == 0.0));
            CHECK(ex.perturbed.data[i] == ex.original.data[i] + d);
            linf = std::max(linf, std::fabs(d));
            if (d != 0.0) ++count;
            sq += d * d;
        }
        CHECK(linf <= cfg.epsilon);
        // squared L2 == eps^2 x perturbed-count within 1e-12
        CHECK(std::fabs(sq - cfg.epsilon * cfg.epsilon *
                                 static_cast<double>(count)) <= 1e-12);
        // perturbed count == number of nonzero gradient components
        numerics::Tensor g = input_gradient(m, ex.original, ex.true_label);
        std::size_t nonzero = 0;
        for (double v : g.data) nonzero += v != 0.0;
        CHECK(count == nonzero);
    }

    PerturbationStats stats = perturbation_stats(r.examples, schema);
    CHECK(stats.application.max_perturbed_count <= 2.0);
    CHECK(stats.network.max_perturbed_count <= 3.0);
    CHECK(stats.application.mean_linf <= stats.application.max_linf);
    CHECK(stats.application.max_linf <= cfg.epsilon);
}

TEST_CASE("attack summary and filtering are consistent") {
    Model m = toy_model(9);
    data::Dataset ds = toy_dataset();
    AttackConfig cfg;  // filter on by default
    AttackResult r = attack_batch(m, ds, cfg);
    CHECK(r.summary.total == ds.rows);
    for (const AdversarialExample& ex : r.examples)
        CHECK(ex.adv_pred != ex.true_label);
    CHECK(r.examples.size() == r.summary.successes);
    CHECK(r.summary.success_rate ==
          doctest::Approx(static_cast<double>(r.summary.successes) /
                          static_cast<double>(r.summary.total)));
    CHECK(r.summary.clean_accuracy >= 0.0);
    CHECK(r.summary.clean_accuracy <= 1.0);
    CHECK(r.summary.adversarial_accuracy >= 0.0);
    CHECK(r.summary.adversarial_accuracy <= 1.0);
}

TEST_CASE("perturbation stats on hand-built fixtures") {
    data::FeatureSchema schema = toy_schema();

    AdversarialExample ex;
    ex.original = numerics::Tensor::from({0.5, 0.0, 1.0, 0.0, 0.0});
    ex.delta = numerics::Tensor::from({0.01, -0.01, 0.0, 0.0, 0.0});
    ex.perturbed = ex.original;
    for (std::size_t i = 0; i < 5; ++i) ex.perturbed.data[i] += ex.delta.data[i];

    PerturbationStats s = perturbation_stats({ex}, schema);
    CHECK(s.application.mean_perturbed_count == 2.0);
    CHECK(s.application.mean_sq_distance == doctest::Approx(2e-4).epsilon(1e-12));
    CHECK(s.application.mean_linf == 0.01);
    CHECK(s.application.mean_l2 == doctest::Approx(std::sqrt(2e-4)).epsilon(1e-12));
    CHECK(s.network.mean_perturbed_count == 0.0);
    CHECK(s.network.mean_sq_distance == 0.0);
    CHECK(s.network.mean_linf == 0.0);

    AdversarialExample same = ex;
    same.delta.fill(0.0);
    same.perturbed = same.original;
    PerturbationStats z = perturbation_stats({same}, schema);
    CHECK(z.application.mean_perturbed_count == 0.0);
    CHECK(z.application.max_sq_distance == 0.0);

    CHECK_THROWS_AS(perturbation_stats({}, schema), StatsError);
}

TEST_CASE("validity: schema-fit clean data scores 0% everywhere") {
    data::Dataset ds = toy_dataset();
    ValidityReport v = validity_analysis(ds);
    CHECK(v.application.pct_invalid_range == 0.0);
    CHECK(v.application.pct_invalid_binary == 0.0);
    CHECK(v.application.pct_invalid_class_belonging == 0.0);
    CHECK(v.network.pct_invalid_range == 0.0);
    CHECK(v.network.pct_invalid_binary == 0.0);
    CHECK(v.network.pct_invalid_class_belonging == 0.0);
}

TEST_CASE("validity: a binary feature at 0.99 flags half the set") {
    data::FeatureSchema schema = toy_schema();
    AdversarialExample ok;
    ok.original = numerics::Tensor::from({0.5, 1.0, 0.0, 1.0, 0.0});
    ok.perturbed = ok.original;
    ok.delta = numerics::Tensor::zeros({5});
    AdversarialExample bad = ok;
    bad.perturbed.data[1] = 0.99;  // f_bin off the lattice

    ValidityReport v = validity_analysis({ok, bad}, schema);
    CHECK(v.application.pct_invalid_binary == 50.0);
    CHECK(v.application.pct_invalid_range == 0.0);   // 0.99 still in [0,1]
    CHECK(v.network.pct_invalid_binary == 0.0);
    CHECK(v.network.pct_invalid_class_belonging == 0.0);
}

TEST_CASE("validity: out-of-range and broken one-hot groups are caught") {
    data::FeatureSchema schema = toy_schema();
    AdversarialExample ex;
    ex.original = numerics::Tensor::from({0.5, 1.0, 0.0, 1.0, 0.0});
    ex.perturbed = numerics::Tensor::from({1.01, 1.0, 0.0, 0.99, 0.0});
    ex.delta = numerics::Tensor::zeros({5});

    ValidityReport v = validity_analysis({ex}, schema);
    CHECK(v.application.pct_invalid_range == 100.0);  // 1.01 out of range
    CHECK(v.network.pct_invalid_class_belonging == 100.0);  // no exact one-hot 1
    CHECK(v.network.pct_invalid_range == 0.0);

    // a perturbed binary column is always invalid for eps in (0,1)
    AdversarialExample bin;
    bin.original = numerics::Tensor::from({0.5, 1.0, 0.0, 1.0, 0.0});
    bin.perturbed = bin.original;
    bin.perturbed.data[1] = 1.01;
    bin.delta = numerics::Tensor::zeros({5});
    ValidityReport vb = validity_analysis({bin}, schema);
    CHECK(vb.application.pct_invalid_binary == 100.0);
}

TEST_CASE("validity: class belonging is 0% for a group without one-hot columns") {
    // network side holds only a continuous column here
    data::FeatureSchema schema;
    schema.label_column = "Attack_type";
    data::ColumnSpec a;
    a.name = "f_app";
    a.group = data::ColumnGroup::Application;
    a.kind = data::ColumnKind::Continuous;
    a.observed_min = 0.0;
    a.observed_max = 1.0;
    data::ColumnSpec n = a;
    n.name = "f_net";
    n.group = data::ColumnGroup::Network;
    schema.columns = {a, n};
    schema.application_count = 1;
    schema.network_count = 1;

    AdversarialExample ex;
    ex.original = numerics::Tensor::from({0.5, 0.5});
    ex.perturbed = numerics::Tensor::from({1.2, -0.2});  // both out of range
    ex.delta = numerics::Tensor::zeros({2});
    ValidityReport v = validity_analysis({ex}, schema);
    CHECK(v.network.pct_invalid_class_belonging == 0.0);
    CHECK(v.application.pct_invalid_class_belonging == 0.0);
    CHECK(v.network.pct_invalid_range == 100.0);
}

TEST_CASE("adversarial CSV round-trips exactly") {
    Model m = toy_model(10);
    data::Dataset ds = toy_dataset();
    AttackConfig cfg;
    cfg.filter_successful = false;
    AttackResult r = attack_batch(m, ds, cfg);
    data::FeatureSchema schema = toy_schema();

    auto path = std::filesystem::temp_directory_path() / "advids_adv.csv";
    save_adversarial_csv(r.examples, schema, path.string());
    std::vector<AdversarialExample> back =
        load_adversarial_csv(path.string(), schema);
    REQUIRE(back.size() == r.examples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].original.data == r.examples[i].original.data);
        CHECK(back[i].perturbed.data == r.examples[i].perturbed.data);
        CHECK(back[i].true_label == r.examples[i].true_label);
        CHECK(back[i].clean_pred == r.examples[i].clean_pred);
        CHECK(back[i].adv_pred == r.examples[i].adv_pred);
        CHECK(back[i].success == r.examples[i].success);
    }
    std::filesystem::remove(path);
}

TEST_CASE("attack report JSON is stable and complete") {
    Model m = toy_model(11);
    data::Dataset ds = toy_dataset();
    AttackConfig cfg;
    cfg.filter_successful = false;
    AttackResult r = attack_batch(m, ds, cfg);
    data::FeatureSchema schema = toy_schema();
    PerturbationStats stats = perturbation_stats(r.examples, schema);
    ValidityReport validity = validity_analysis(r.examples, schema);

    std::string a = attack_report_json(cfg, r.summary, stats, validity);
    std::string b = attack_report_json(cfg, r.summary, stats, validity);
    CHECK(a == b);

    auto doc = nlohmann::json::parse(a);
    CHECK(doc["config"]["epsilon"] == 0.01);
    CHECK(doc["summary"]["total"] == 4);
    CHECK(doc["perturbation"]["application"].contains("mean_sq_distance"));
    CHECK(doc["validity"]["network"].contains("pct_invalid_class_belonging"));
}
