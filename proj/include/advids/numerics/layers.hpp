#pragma once

#include <string>
#include <variant>
#include <vector>

#include "advids/numerics/rng.hpp"
#include "advids/numerics/tensor.hpp"

namespace advids::numerics {

struct Conv1dSpec {
    std::size_t in_channels;
    std::size_t out_channels;
    std::size_t kernel_size;
    std::size_t padding;
};

struct ReluSpec {};

struct MaxPool1dSpec {
    std::size_t window;
    std::size_t stride;
};

struct LinearSpec {
    std::size_t in_units;
    std::size_t out_units;
};

struct LogSoftmaxSpec {};

struct SigmoidSpec {};

using LayerSpec = std::variant<Conv1dSpec, ReluSpec, MaxPool1dSpec, LinearSpec,
                               LogSoftmaxSpec, SigmoidSpec>;

// Throws ConfigError for zero counts / windows.
void validate_spec(const LayerSpec& spec);

std::string spec_kind(const LayerSpec& spec);

struct LayerState {
    LayerSpec spec;
    std::string name;
    std::vector<Tensor> params;  // [weight, bias] or empty
    std::vector<Tensor> grads;   // same shapes as params
};

// Initializes params with uniform(-a, a), a = sqrt(1/fan_in), for weight
// and bias alike. Parameterless variants get empty params.
LayerState make_layer(const LayerSpec& spec, const std::string& name, Rng& rng);

void zero_grads(LayerState& layer);

std::size_t param_count(const LayerState& layer);

struct ForwardCache {
    Tensor input;
    Tensor output;                     // kept for logsoftmax/sigmoid
    std::vector<std::size_t> argmax;   // maxpool winners
    const LayerState* layer = nullptr;
};

// Returns the layer output and fills `cache` with what backward needs.
Tensor forward(const LayerState& layer, const Tensor& input, ForwardCache& cache);

// Returns grad wrt the layer input; accumulates param grads into
// layer.grads (never overwrites).
Tensor backward(LayerState& layer, const ForwardCache& cache,
                const Tensor& grad_output);

}  // namespace advids::numerics
