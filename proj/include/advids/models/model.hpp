#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advids/errors.hpp"
#include "advids/numerics/layers.hpp"
#include "advids/numerics/rng.hpp"

namespace advids::models {

using numerics::ForwardCache;
using numerics::LayerState;
using numerics::Rng;
using numerics::Tensor;

enum class ModelKind { Classifier, Discriminator, Generator };

std::string kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name);

// The three networks share one conv trunk shape; width parameters are
// explicit so desk-scale tests can shrink them.
struct ClassifierConfig {
    std::size_t input_width = 95;
    std::size_t conv1_channels = 64;
    std::size_t conv2_channels = 32;
    std::size_t conv3_channels = 16;
    std::size_t kernel_size = 3;
    std::size_t padding = 1;
    std::size_t hidden_units = 30;
    std::size_t num_classes = 15;
};

struct DiscriminatorConfig {
    std::size_t input_width = 95;
    std::size_t conv1_channels = 64;
    std::size_t conv2_channels = 32;
    std::size_t conv3_channels = 16;
    std::size_t kernel_size = 3;
    std::size_t padding = 1;
    std::size_t hidden_units = 30;
};

struct GeneratorConfig {
    std::size_t noise_dim = 64;
    std::size_t hidden_units = 128;
    std::size_t output_width = 95;
};

struct ModelMeta {
    std::uint64_t epochs = 0;
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    double final_loss_aux = 0.0;
};

struct Model {
    ModelKind kind = ModelKind::Classifier;
    std::size_t input_width = 0;
    std::size_t output_width = 0;
    // serialized verbatim into checkpoints; shapes derive from it on load
    std::vector<std::size_t> config_fields;
    std::vector<LayerState> layers;
    ModelMeta meta;
};

Model build_classifier(const ClassifierConfig& config, Rng& rng);
Model build_discriminator(const DiscriminatorConfig& config, Rng& rng);
Model build_generator(const GeneratorConfig& config, Rng& rng);

// Rebuild an architecture from the fields stored in a checkpoint header.
Model build_from_fields(ModelKind kind, const std::vector<std::size_t>& fields,
                        Rng& rng);

std::size_t param_count(const Model& model);
void zero_grads(Model& model);

// Forward through the full stack. `caches`, when given, is resized to one
// entry per layer so a training step can run backward afterwards.
Tensor model_forward(const Model& model, const Tensor& input,
                     std::vector<ForwardCache>* caches = nullptr);

// Backward through the full stack, accumulating param grads; returns the
// gradient with respect to the model input.
Tensor model_backward(Model& model, const std::vector<ForwardCache>& caches,
                      const Tensor& grad_output);

struct Prediction {
    std::size_t label = 0;
    Tensor log_probs;
};

// Classifier inference on one width-input_width feature vector.
// Ties in the argmax resolve to the lowest class index.
Prediction predict(const Model& model, const Tensor& x);

}  // namespace advids::models
