#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "advids/models/checkpoint.hpp"
#include "advids/models/model.hpp"
#include "advids/numerics/losses.hpp"

using namespace advids;
using namespace advids::models;

namespace {

// desk-scale classifier for gradient and persistence tests
ClassifierConfig tiny_clf() { return {7, 3, 2, 2, 3, 1, 4, 3}; }

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("default classifier has 54,079 parameters") {
    Rng rng(1);
    Model m = build_classifier({}, rng);
    CHECK(param_count(m) == 54079);
    // per-layer: 256 + 6,176 + 1,552 + 45,630 + 465
    CHECK(numerics::param_count(m.layers[0]) == 256);
    CHECK(numerics::param_count(m.layers[2]) == 6176);
    CHECK(numerics::param_count(m.layers[4]) == 1552);
    CHECK(numerics::param_count(m.layers[6]) == 45630);
    CHECK(numerics::param_count(m.layers[8]) == 465);
}

TEST_CASE("same seed gives bit-identical initial weights") {
    Rng a(9), b(9);
    Model ma = build_classifier({}, a);
    Model mb = build_classifier({}, b);
    for (std::size_t i = 0; i < ma.layers.size(); ++i)
        for (std::size_t p = 0; p < ma.layers[i].params.size(); ++p)
            CHECK(ma.layers[i].params[p].data == mb.layers[i].params[p].data);
}

TEST_CASE("classifier forward on zeros yields a normalized distribution") {
    Rng rng(2);
    Model m = build_classifier({}, rng);
    Tensor y = model_forward(m, Tensor::zeros({95}));
    REQUIRE(y.numel() == 15);
    double sum = 0.0;
    for (double v : y.data) sum += std::exp(v);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classifier and discriminator share the conv trunk shape") {
    Rng rng(3);
    Model clf = build_classifier({}, rng);
    Model disc = build_discriminator({}, rng);
    // trunk = everything up to the head (conv1..relu4 -> 8 layers)
    for (std::size_t i = 0; i < 8; ++i) {
        REQUIRE(clf.layers[i].params.size() == disc.layers[i].params.size());
        for (std::size_t p = 0; p < clf.layers[i].params.size(); ++p)
            CHECK(clf.layers[i].params[p].shape == disc.layers[i].params[p].shape);
    }
    CHECK(disc.output_width == 1);
}

TEST_CASE("discriminator output is strictly inside (0,1)") {
    Rng rng(4);
    Model d = build_discriminator({}, rng);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor x = Tensor::zeros({95});
        for (double& v : x.data) v = rng.uniform(-3.0, 3.0);
        Tensor y = model_forward(d, x);
        REQUIRE(y.numel() == 1);
        CHECK(y.data[0] > 0.0);
        CHECK(y.data[0] < 1.0);
    }
}

TEST_CASE("generator output lands in (0,1)^95") {
    Rng rng(5);
    Model g = build_generator({}, rng);
    Tensor z = Tensor::zeros({64});
    for (double& v : z.data) v = rng.normal();
    Tensor y = model_forward(g, z);
    REQUIRE(y.numel() == 95);
    for (double v : y.data) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("predict follows a bias-forced argmax and breaks ties low") {
    Rng rng(6);
    Model m = build_classifier(tiny_clf(), rng);
    // zero the head weights, put a strong bias on class 0
    LayerState& out = m.layers[8];
    out.params[0].fill(0.0);
    out.params[1].fill(0.0);
    out.params[1].data[0] = 10.0;
    Tensor x = Tensor::zeros({7});
    for (double& v : x.data) v = rng.uniform(0.0, 1.0);
    CHECK(predict(m, x).label == 0);

    // all-equal logits tie -> lowest index wins
    out.params[1].fill(0.0);
    CHECK(predict(m, x).label == 0);
}

TEST_CASE("predict rejects a wrong-length input") {
    Rng rng(7);
    Model m = build_classifier({}, rng);
    CHECK_THROWS_AS(predict(m, Tensor::zeros({94})), DimensionError);
}

TEST_CASE("full-model gradients match finite differences") {
    Rng rng(8);
    Model m = build_classifier(tiny_clf(), rng);
    Tensor x = Tensor::zeros({7});
    for (double& v : x.data) v = rng.uniform(0.1, 0.9);
    const std::size_t label = 1;

    auto loss_at = [&]() {
        Tensor lp = model_forward(m, x);
        return numerics::cross_entropy_loss(lp, label).loss;
    };

    std::vector<ForwardCache> caches;
    Tensor lp = model_forward(m, x, &caches);
    auto r = numerics::cross_entropy_loss(lp, label);
    zero_grads(m);
    Tensor gx = model_backward(m, caches, r.grad);

    const double h = 1e-5;
    double worst = 0.0;
    auto probe = [&](double& slot, double analytic) {
        const double keep = slot;
        slot = keep + h;
        const double up = loss_at();
        slot = keep - h;
        const double dn = loss_at();
        slot = keep;
        const double numeric = (up - dn) / (2.0 * h);
        const double rel =
            std::fabs(analytic - numeric) /
            std::max(1e-8, std::fabs(analytic) + std::fabs(numeric));
        worst = std::max(worst, rel);
    };
    for (std::size_t li = 0; li < m.layers.size(); ++li)
        for (std::size_t p = 0; p < m.layers[li].params.size(); ++p)
            for (std::size_t i = 0; i < m.layers[li].params[p].numel(); ++i)
                probe(m.layers[li].params[p].data[i],
                      m.layers[li].grads[p].data[i]);
    for (std::size_t i = 0; i < x.numel(); ++i) probe(x.data[i], gx.data[i]);
    CHECK(worst < 1e-4);
}

TEST_CASE("checkpoint round-trip reproduces predictions bit for bit") {
    Rng rng(10);
    Model m = build_classifier(tiny_clf(), rng);
    m.meta = {15, 12345, 0.25, 0.0};
    const auto path = temp_file("advids_ckpt_roundtrip.bin");
    save_checkpoint(m, path.string());
    Model back = load_checkpoint(path.string(), ModelKind::Classifier);
    CHECK(back.meta.epochs == 15);
    CHECK(back.meta.seed == 12345);
    CHECK(param_count(back) == param_count(m));

    Rng xr(11);
    for (int trial = 0; trial < 5; ++trial) {
        Tensor x = Tensor::zeros({7});
        for (double& v : x.data) v = xr.uniform(0.0, 1.0);
        Prediction a = predict(m, x);
        Prediction b = predict(back, x);
        CHECK(a.label == b.label);
        CHECK(a.log_probs.data == b.log_probs.data);
    }
    std::filesystem::remove(path);
}

TEST_CASE("truncated checkpoint fails cleanly") {
    Rng rng(12);
    Model m = build_classifier(tiny_clf(), rng);
    const auto path = temp_file("advids_ckpt_trunc.bin");
    save_checkpoint(m, path.string());
    const auto full = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, full - 9);
    CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointError);
    std::filesystem::remove(path);
}

TEST_CASE("kind mismatch and bad magic are rejected") {
    Rng rng(13);
    Model m = build_classifier(tiny_clf(), rng);
    const auto path = temp_file("advids_ckpt_kind.bin");
    save_checkpoint(m, path.string());
    CHECK_THROWS_AS(load_checkpoint(path.string(), ModelKind::Discriminator),
                    CheckpointError);

    std::ofstream bad(path, std::ios::binary | std::ios::trunc);
    bad << "NOTAMODEL________________";
    bad.close();
    CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointError);
    std::filesystem::remove(path);
}

TEST_CASE("trailing bytes after the parameter blocks are rejected") {
    Rng rng(14);
    Model m = build_generator({5, 6, 4}, rng);
    const auto path = temp_file("advids_ckpt_trail.bin");
    save_checkpoint(m, path.string());
    std::ofstream app(path, std::ios::binary | std::ios::app);
    app << "x";
    app.close();
    CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointError);
    std::filesystem::remove(path);
}
