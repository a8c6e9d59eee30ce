#include "advids/numerics/layers.hpp"

#include <algorithm>
#include <cmath>

#include "advids/numerics/kernels.hpp"

namespace advids::numerics {

namespace {

struct SpecValidator {
    void operator()(const Conv1dSpec& s) const {
        if (s.in_channels < 1 || s.out_channels < 1 || s.kernel_size < 1) {
            throw ConfigError("Conv1d: channel and kernel counts must be >= 1");
        }
    }
    void operator()(const ReluSpec&) const {}
    void operator()(const MaxPool1dSpec& s) const {
        if (s.window < 1 || s.stride < 1) {
            throw ConfigError("MaxPool1d: window and stride must be >= 1");
        }
    }
    void operator()(const LinearSpec& s) const {
        if (s.in_units < 1 || s.out_units < 1) {
            throw ConfigError("Linear: unit counts must be >= 1");
        }
    }
    void operator()(const LogSoftmaxSpec&) const {}
    void operator()(const SigmoidSpec&) const {}
};

struct KindName {
    std::string operator()(const Conv1dSpec&) const { return "Conv1d"; }
    std::string operator()(const ReluSpec&) const { return "ReLU"; }
    std::string operator()(const MaxPool1dSpec&) const { return "MaxPool1d"; }
    std::string operator()(const LinearSpec&) const { return "Linear"; }
    std::string operator()(const LogSoftmaxSpec&) const { return "LogSoftmax"; }
    std::string operator()(const SigmoidSpec&) const { return "Sigmoid"; }
};

void init_uniform(Tensor& t, double bound, Rng& rng) {
    for (double& v : t.data) v = rng.uniform(-bound, bound);
}

}  // namespace

void validate_spec(const LayerSpec& spec) { std::visit(SpecValidator{}, spec); }

std::string spec_kind(const LayerSpec& spec) { return std::visit(KindName{}, spec); }

LayerState make_layer(const LayerSpec& spec, const std::string& name, Rng& rng) {
    validate_spec(spec);
    LayerState layer;
    layer.spec = spec;
    layer.name = name;
    if (const auto* c = std::get_if<Conv1dSpec>(&spec)) {
        Tensor w = Tensor::zeros({c->out_channels, c->in_channels, c->kernel_size});
        Tensor b = Tensor::zeros({c->out_channels});
        double bound = std::sqrt(1.0 / static_cast<double>(c->in_channels * c->kernel_size));
        init_uniform(w, bound, rng);
        init_uniform(b, bound, rng);
        layer.params = {std::move(w), std::move(b)};
    } else if (const auto* l = std::get_if<LinearSpec>(&spec)) {
        Tensor w = Tensor::zeros({l->out_units, l->in_units});
        Tensor b = Tensor::zeros({l->out_units});
        double bound = std::sqrt(1.0 / static_cast<double>(l->in_units));
        init_uniform(w, bound, rng);
        init_uniform(b, bound, rng);
        layer.params = {std::move(w), std::move(b)};
    }
    for (const Tensor& p : layer.params) {
        layer.grads.push_back(Tensor::zeros(p.shape));
    }
    return layer;
}

void zero_grads(LayerState& layer) {
    for (Tensor& g : layer.grads) g.fill(0.0);
}

std::size_t param_count(const LayerState& layer) {
    std::size_t n = 0;
    for (const Tensor& p : layer.params) n += p.numel();
    return n;
}

namespace {

Tensor forward_conv(const LayerState& layer, const Conv1dSpec& s, const Tensor& x) {
    if (x.rank() != 2 || x.shape[0] != s.in_channels) {
        throw DimensionError(layer.name + " (Conv1d): expected input (" +
                             std::to_string(s.in_channels) + ", length), got " +
                             shape_str(x.shape));
    }
    std::size_t len = x.shape[1];
    std::size_t padded = len + 2 * s.padding;
    if (padded < s.kernel_size) {
        throw DimensionError(layer.name + " (Conv1d): padded length " +
                             std::to_string(padded) + " shorter than kernel " +
                             std::to_string(s.kernel_size));
    }
    std::size_t out_len = padded - s.kernel_size + 1;
    Tensor out = Tensor::zeros({s.out_channels, out_len});
    kernels::omp::conv1d_forward(x.data.data(), s.in_channels, len,
                                 layer.params[0].data.data(),
                                 layer.params[1].data.data(), s.out_channels,
                                 s.kernel_size, s.padding, out.data.data(), out_len);
    return out;
}

Tensor forward_maxpool(const LayerState& layer, const MaxPool1dSpec& s,
                       const Tensor& x, std::vector<std::size_t>& argmax) {
    if (x.rank() != 2) {
        throw DimensionError(layer.name + " (MaxPool1d): expected input (channels, length), got " +
                             shape_str(x.shape));
    }
    std::size_t channels = x.shape[0];
    std::size_t len = x.shape[1];
    if (len < s.window) {
        throw DimensionError(layer.name + " (MaxPool1d): length " + std::to_string(len) +
                             " shorter than window " + std::to_string(s.window));
    }
    std::size_t out_len = (len - s.window) / s.stride + 1;
    Tensor out = Tensor::zeros({channels, out_len});
    argmax.assign(channels * out_len, 0);
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t i = 0; i < out_len; ++i) {
            std::size_t base = i * s.stride;
            std::size_t best = base;
            double best_v = x.at2(c, base);
            for (std::size_t t = 1; t < s.window; ++t) {
                double v = x.at2(c, base + t);
                if (v > best_v) {
                    best_v = v;
                    best = base + t;
                }
            }
            out.at2(c, i) = best_v;
            argmax[c * out_len + i] = best;
        }
    }
    return out;
}

Tensor forward_linear(const LayerState& layer, const LinearSpec& s, const Tensor& x) {
    if (x.rank() != 1 || x.shape[0] != s.in_units) {
        throw DimensionError(layer.name + " (Linear): expected input (" +
                             std::to_string(s.in_units) + "), got " +
                             shape_str(x.shape));
    }
    Tensor out = Tensor::zeros({s.out_units});
    kernels::omp::linear_forward(x.data.data(), s.in_units,
                                 layer.params[0].data.data(),
                                 layer.params[1].data.data(), s.out_units,
                                 out.data.data());
    return out;
}

Tensor forward_logsoftmax(const Tensor& x) {
    Tensor out = Tensor::zeros(x.shape);
    double mx = x.data[0];
    for (double v : x.data) mx = std::max(mx, v);
    double sum = 0.0;
    for (double v : x.data) sum += std::exp(v - mx);
    double lse = mx + std::log(sum);
    for (std::size_t i = 0; i < x.numel(); ++i) out.data[i] = x.data[i] - lse;
    return out;
}

}  // namespace

Tensor forward(const LayerState& layer, const Tensor& input, ForwardCache& cache) {
    cache.layer = &layer;
    cache.input = input;
    cache.argmax.clear();
    Tensor out;
    if (const auto* c = std::get_if<Conv1dSpec>(&layer.spec)) {
        out = forward_conv(layer, *c, input);
    } else if (std::get_if<ReluSpec>(&layer.spec)) {
        out = input;
        for (double& v : out.data) v = std::max(0.0, v);
    } else if (const auto* m = std::get_if<MaxPool1dSpec>(&layer.spec)) {
        out = forward_maxpool(layer, *m, input, cache.argmax);
    } else if (const auto* l = std::get_if<LinearSpec>(&layer.spec)) {
        out = forward_linear(layer, *l, input);
    } else if (std::get_if<LogSoftmaxSpec>(&layer.spec)) {
        if (input.rank() != 1) {
            throw DimensionError(layer.name + " (LogSoftmax): expected rank-1 input, got " +
                                 shape_str(input.shape));
        }
        out = forward_logsoftmax(input);
    } else {
        out = input;
        for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
    }
    cache.output = out;
    return out;
}

Tensor backward(LayerState& layer, const ForwardCache& cache,
                const Tensor& grad_output) {
    if (cache.layer != &layer) {
        throw UsageError("backward: cache does not belong to layer '" + layer.name + "'");
    }
    if (grad_output.shape != cache.output.shape) {
        throw DimensionError(layer.name + ": grad_output shape " +
                             shape_str(grad_output.shape) + " != output shape " +
                             shape_str(cache.output.shape));
    }
    const Tensor& x = cache.input;
    Tensor gx = Tensor::zeros(x.shape);

    if (const auto* c = std::get_if<Conv1dSpec>(&layer.spec)) {
        std::size_t len = x.shape[1];
        std::size_t out_len = cache.output.shape[1];
        kernels::omp::conv1d_backward(
            x.data.data(), c->in_channels, len, layer.params[0].data.data(),
            c->out_channels, c->kernel_size, c->padding, grad_output.data.data(),
            out_len, gx.data.data(), layer.grads[0].data.data(),
            layer.grads[1].data.data());
    } else if (std::get_if<ReluSpec>(&layer.spec)) {
        for (std::size_t i = 0; i < x.numel(); ++i) {
            gx.data[i] = x.data[i] > 0.0 ? grad_output.data[i] : 0.0;
        }
    } else if (const auto* m = std::get_if<MaxPool1dSpec>(&layer.spec)) {
        std::size_t channels = x.shape[0];
        std::size_t len = x.shape[1];
        std::size_t out_len = cache.output.shape[1];
        (void)m;
        for (std::size_t c2 = 0; c2 < channels; ++c2) {
            for (std::size_t i = 0; i < out_len; ++i) {
                gx.data[c2 * len + cache.argmax[c2 * out_len + i]] +=
                    grad_output.at2(c2, i);
            }
        }
    } else if (const auto* l = std::get_if<LinearSpec>(&layer.spec)) {
        kernels::omp::linear_backward(x.data.data(), l->in_units,
                                      layer.params[0].data.data(), l->out_units,
                                      grad_output.data.data(), gx.data.data(),
                                      layer.grads[0].data.data(),
                                      layer.grads[1].data.data());
    } else if (std::get_if<LogSoftmaxSpec>(&layer.spec)) {
        double gsum = 0.0;
        for (double g : grad_output.data) gsum += g;
        for (std::size_t i = 0; i < x.numel(); ++i) {
            gx.data[i] = grad_output.data[i] - std::exp(cache.output.data[i]) * gsum;
        }
    } else {
        for (std::size_t i = 0; i < x.numel(); ++i) {
            double y = cache.output.data[i];
            gx.data[i] = grad_output.data[i] * y * (1.0 - y);
        }
    }
    return gx;
}

}  // namespace advids::numerics
