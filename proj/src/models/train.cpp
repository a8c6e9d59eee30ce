#include "advids/models/train.hpp"

#include <algorithm>
#include <numeric>

#include "advids/numerics/losses.hpp"

namespace advids::models {

namespace {

using data::Dataset;

std::vector<double> flat_grads(const Model& model) {
    std::vector<double> out;
    for (const LayerState& layer : model.layers)
        for (const Tensor& g : layer.grads)
            out.insert(out.end(), g.data.begin(), g.data.end());
    return out;
}

void add_scaled_grads(Model& model, const std::vector<double>& flat, double scale) {
    std::size_t k = 0;
    for (LayerState& layer : model.layers)
        for (Tensor& g : layer.grads)
            for (double& v : g.data) v += flat[k++] * scale;
}

}  // namespace

TrainReport train_classifier(Model& model, const Dataset& train,
                             const TrainConfig& config) {
    if (model.kind != ModelKind::Classifier)
        throw UsageError("train_classifier requires a classifier model");
    if (train.rows == 0) throw UsageError("training set is empty");
    if (model.input_width != train.cols)
        throw DimensionError("model expects width " +
                             std::to_string(model.input_width) +
                             ", training set has " + std::to_string(train.cols));
    if (config.epochs == 0 || config.batch_size == 0)
        throw ConfigError("epochs and batch_size must be positive");
    for (std::uint8_t l : train.labels)
        if (l >= model.output_width)
            throw DomainError("label index " + std::to_string(l) +
                              " out of range for a " +
                              std::to_string(model.output_width) +
                              "-class model");

    numerics::Optimizer opt(config.optimizer);
    numerics::Rng rng(config.seed);
    std::vector<std::size_t> order(train.rows);
    std::iota(order.begin(), order.end(), 0);

    TrainReport report;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < train.rows;
             start += config.batch_size) {
            const std::size_t bs = std::min(config.batch_size, train.rows - start);
            std::vector<std::vector<double>> slot_grads(bs);
            std::vector<double> slot_loss(bs);

#pragma omp parallel
            {
                Model scratch = model;
                std::vector<ForwardCache> caches;
#pragma omp for schedule(static)
                for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(bs);
                     ++i) {
                    const std::size_t r = order[start + static_cast<std::size_t>(i)];
                    Tensor log_probs =
                        model_forward(scratch, train.row(r), &caches);
                    auto loss =
                        numerics::cross_entropy_loss(log_probs, train.labels[r]);
                    zero_grads(scratch);
                    model_backward(scratch, caches, loss.grad);
                    slot_loss[static_cast<std::size_t>(i)] = loss.loss;
                    slot_grads[static_cast<std::size_t>(i)] = flat_grads(scratch);
                }
            }

            // mean gradient, reduced in example order
            zero_grads(model);
            const double scale = 1.0 / static_cast<double>(bs);
            for (std::size_t i = 0; i < bs; ++i)
                add_scaled_grads(model, slot_grads[i], scale);
            opt.step(model.layers);
            for (double l : slot_loss) epoch_loss += l;
        }
        report.epoch_losses.push_back(epoch_loss / static_cast<double>(train.rows));
    }

    model.meta.epochs = config.epochs;
    model.meta.seed = config.seed;
    model.meta.final_loss = report.epoch_losses.back();
    return report;
}

double classifier_accuracy(const Model& model, const Dataset& ds) {
    if (ds.rows == 0) throw UsageError("accuracy on an empty dataset");
    std::size_t correct = 0;
#pragma omp parallel for schedule(static) reduction(+ : correct)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(ds.rows); ++r) {
        const std::size_t row = static_cast<std::size_t>(r);
        correct += predict(model, ds.row(row)).label == ds.labels[row];
    }
    return static_cast<double>(correct) / static_cast<double>(ds.rows);
}

}  // namespace advids::models
