#pragma once

#include "advids/data/dataset.hpp"
#include "advids/models/model.hpp"
#include "advids/numerics/optimizer.hpp"

namespace advids::models {

struct TrainConfig {
    std::size_t epochs = 15;
    std::size_t batch_size = 32;
    numerics::OptimizerConfig optimizer;  // Adam, lr 1e-3
    std::uint64_t seed = 42;
};

struct TrainReport {
    std::vector<double> epoch_losses;  // mean cross-entropy per epoch
};

// Mini-batch training with mean-gradient Adam/SGD steps. Per-example
// gradients are computed in parallel into per-slot buffers and reduced in
// example order, so the result is bit-identical for any thread count.
TrainReport train_classifier(Model& model, const data::Dataset& train,
                             const TrainConfig& config);

// Fraction of rows whose predicted label matches; safe to call in parallel.
double classifier_accuracy(const Model& model, const data::Dataset& ds);

}  // namespace advids::models
