#include "advids/gan/gan.hpp"

#include <cmath>
#include <optional>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "advids/errors.hpp"
#include "advids/numerics/losses.hpp"
#include "advids/numerics/optimizer.hpp"
#include "advids/numerics/rng.hpp"

namespace advids::gan {

namespace {

using models::ForwardCache;
using numerics::Rng;

Tensor sample_noise(std::size_t dim, Rng& rng) {
    Tensor z = Tensor::zeros({dim});
    for (double& v : z.data) v = rng.normal();
    return z;
}

// Accumulates d BCE/d params for one sample into the discriminator's grad
// buffers, scaled by `scale`; returns the per-sample loss.
double accumulate_disc(Model& disc, const Tensor& x, double target,
                       double scale, std::vector<ForwardCache>& caches) {
    Tensor prob = models::model_forward(disc, x, &caches);
    numerics::BceLoss bce = numerics::bce_loss(prob.data[0], target);
    Tensor g = Tensor::zeros({1});
    g.data[0] = bce.grad_prob * scale;
    models::model_backward(disc, caches, g);
    return bce.loss;
}

}  // namespace

void validate_config(const GanConfig& c) {
    if (c.noise_dim == 0) throw ConfigError("noise_dim must be positive");
    if (c.epochs == 0) throw ConfigError("epochs must be at least 1");
    if (c.batch_size == 0) throw ConfigError("batch_size must be positive");
    if (c.checkpoint_interval == 0)
        throw ConfigError("checkpoint_interval must be at least 1");
    if (!(c.threshold > 0.0) || !(c.threshold < 1.0))
        throw ConfigError("threshold must lie strictly inside (0,1)");
    if (!std::isfinite(c.lr_g) || c.lr_g < 0.0 || !std::isfinite(c.lr_d) ||
        c.lr_d < 0.0)
        throw ConfigError("learning rates must be finite and non-negative");
}

GanResult train_gan(const Dataset& real_data, const GanConfig& config,
                    const std::vector<Tensor>* fgsm_pool) {
    validate_config(config);
    if (real_data.rows == 0) throw UsageError("GAN training set is empty");
    if (config.fgsm_in_training && (!fgsm_pool || fgsm_pool->empty()))
        throw ConfigError(
            "fgsm_in_training requires a non-empty adversarial pool");
    if (fgsm_pool)
        for (const Tensor& t : *fgsm_pool)
            if (t.numel() != real_data.cols)
                throw DimensionError(
                    "adversarial pool row has " + std::to_string(t.numel()) +
                    " features, data has " + std::to_string(real_data.cols));

    Rng rng(config.seed);
    Model gen = models::build_generator(
        {config.noise_dim, 128, real_data.cols}, rng);
    Model disc = models::build_discriminator(
        {real_data.cols, 64, 32, 16, 3, 1, 30}, rng);

    // A zero learning rate freezes that side: its optimizer is never built,
    // so its parameters stay at init bit-for-bit.
    std::optional<numerics::Optimizer> opt_g, opt_d;
    if (config.lr_g > 0.0)
        opt_g.emplace(
            numerics::OptimizerConfig{numerics::OptimizerKind::Adam, config.lr_g});
    if (config.lr_d > 0.0)
        opt_d.emplace(
            numerics::OptimizerConfig{numerics::OptimizerKind::Adam, config.lr_d});

    std::vector<std::size_t> order(real_data.rows);
    std::iota(order.begin(), order.end(), 0);

    LossTrace trace;
    std::vector<ForwardCache> d_caches, g_caches;
    std::size_t global_batch = 0;
    std::size_t pool_cursor = 0;
    double last_d = 0.0, last_g = 0.0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < real_data.rows;
             start += config.batch_size) {
            const std::size_t bs =
                std::min(config.batch_size, real_data.rows - start);
            const double scale = 1.0 / static_cast<double>(bs);
            ++global_batch;

            // Discriminator update: real batch vs frozen fake batch.
            models::zero_grads(disc);
            double d_loss = 0.0;
            for (std::size_t i = 0; i < bs; ++i) {
                const Tensor x = real_data.row(order[start + i]);
                d_loss += accumulate_disc(disc, x, 1.0, scale, d_caches) *
                          scale;
            }
            for (std::size_t i = 0; i < bs; ++i) {
                Tensor fake;
                if (config.fgsm_in_training && i % 2 == 1) {
                    fake = (*fgsm_pool)[pool_cursor % fgsm_pool->size()];
                    ++pool_cursor;
                } else {
                    fake = models::model_forward(
                        gen, sample_noise(config.noise_dim, rng));
                }
                d_loss += accumulate_disc(disc, fake, 0.0, scale, d_caches) *
                          scale;
            }
            if (opt_d) opt_d->step(disc.layers);

            // Generator update through the frozen discriminator.
            models::zero_grads(gen);
            models::zero_grads(disc);
            double g_loss = 0.0;
            for (std::size_t i = 0; i < bs; ++i) {
                Tensor z = sample_noise(config.noise_dim, rng);
                Tensor fake = models::model_forward(gen, z, &g_caches);
                Tensor prob = models::model_forward(disc, fake, &d_caches);
                numerics::BceLoss bce = numerics::bce_loss(prob.data[0], 1.0);
                g_loss += bce.loss * scale;
                Tensor g = Tensor::zeros({1});
                g.data[0] = bce.grad_prob * scale;
                Tensor gx = models::model_backward(disc, d_caches, g);
                models::model_backward(gen, g_caches, gx);
            }
            if (opt_g) opt_g->step(gen.layers);
            // The generator pass left scratch gradients on the frozen
            // discriminator; drop them before its next real update.
            models::zero_grads(disc);

            check_finite_losses(d_loss, g_loss, global_batch,
                                trace.checkpoints.size() + 1);

            last_d = d_loss;
            last_g = g_loss;
            if (global_batch % config.checkpoint_interval == 0)
                trace.checkpoints.push_back(
                    {trace.checkpoints.size() + 1, g_loss, d_loss});
        }
    }

    gen.meta = {config.epochs, config.seed, last_g, last_d};
    disc.meta = {config.epochs, config.seed, last_d, last_g};
    return {std::move(gen), std::move(disc), std::move(trace)};
}

void check_finite_losses(double d_loss, double g_loss, std::size_t batch,
                         std::size_t next_checkpoint) {
    if (std::isfinite(d_loss) && std::isfinite(g_loss)) return;
    throw DivergenceError("training diverged: non-finite loss at batch " +
                          std::to_string(batch) + " (next checkpoint " +
                          std::to_string(next_checkpoint) + ")");
}

Verdict discriminate(const Model& discriminator, const Tensor& x,
                     double threshold) {
    if (discriminator.kind != models::ModelKind::Discriminator)
        throw UsageError("discriminate requires a discriminator model");
    if (x.numel() != discriminator.input_width)
        throw DimensionError("input has " + std::to_string(x.numel()) +
                             " features, discriminator expects " +
                             std::to_string(discriminator.input_width));
    const double score = models::model_forward(discriminator, x).data[0];
    return {score, score >= threshold};
}

DetectorEvaluation evaluate_detector(const Model& discriminator,
                                     const Dataset& real_test,
                                     const std::vector<Tensor>& adv_set,
                                     double threshold) {
    if (real_test.rows == 0 || adv_set.empty())
        throw UsageError("detector evaluation needs non-empty real and "
                         "adversarial sets");

    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
#pragma omp parallel for schedule(static) reduction(+ : tp, fn)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(adv_set.size());
         ++i) {
        const double score =
            models::model_forward(discriminator,
                                  adv_set[static_cast<std::size_t>(i)])
                .data[0];
        if (score < threshold)
            ++tp;
        else
            ++fn;
    }
#pragma omp parallel for schedule(static) reduction(+ : tn, fp)
    for (std::ptrdiff_t r = 0;
         r < static_cast<std::ptrdiff_t>(real_test.rows); ++r) {
        const double score =
            models::model_forward(discriminator,
                                  real_test.row(static_cast<std::size_t>(r)))
                .data[0];
        if (score >= threshold)
            ++tn;
        else
            ++fp;
    }

    DetectorEvaluation eval;
    eval.true_positive = tp;
    eval.false_negative = fn;
    eval.true_negative = tn;
    eval.false_positive = fp;
    eval.adv_recall =
        static_cast<double>(tp) / static_cast<double>(adv_set.size());
    eval.real_recall =
        static_cast<double>(tn) / static_cast<double>(real_test.rows);
    return eval;
}

std::string trace_to_csv(const LossTrace& trace) {
    std::string out = "checkpoint,d_loss,g_loss\n";
    char buf[96];
    for (const TraceCheckpoint& c : trace.checkpoints) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", c.index,
                      c.discriminator_loss, c.generator_loss);
        out += buf;
    }
    return out;
}

LossTrace trace_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "checkpoint,d_loss,g_loss")
        throw UsageError("bad loss-trace header");
    LossTrace trace;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        TraceCheckpoint c;
        char extra;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf%c", &c.index,
                        &c.discriminator_loss, &c.generator_loss,
                        &extra) != 3)
            throw UsageError("bad loss-trace row '" + line + "'");
        if (c.index != trace.checkpoints.size() + 1)
            throw UsageError("loss-trace indices must increase from 1");
        trace.checkpoints.push_back(c);
    }
    return trace;
}

void save_trace(const LossTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << trace_to_csv(trace);
    if (!out) throw UsageError("failed writing '" + path + "'");
}

LossTrace load_trace(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return trace_from_csv(ss.str());
}

}  // namespace advids::gan
