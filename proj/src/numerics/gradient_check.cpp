#include "advids/numerics/gradient_check.hpp"

#include <algorithm>
#include <cmath>

namespace advids::numerics {

namespace {

double rel_error(double a, double n) {
    return std::abs(a - n) / std::max(1e-8, std::abs(a) + std::abs(n));
}

double projected_output(const LayerState& layer, const Tensor& input,
                        const Tensor& u) {
    ForwardCache cache;
    Tensor out = forward(layer, input, cache);
    double s = 0.0;
    for (std::size_t i = 0; i < out.numel(); ++i) s += u.data[i] * out.data[i];
    return s;
}

}  // namespace

double gradient_check(LayerState& layer, const Tensor& input, Rng& rng, double h) {
    ForwardCache cache;
    Tensor out = forward(layer, input, cache);

    Tensor u = Tensor::zeros(out.shape);
    for (double& v : u.data) v = rng.uniform(-1.0, 1.0);

    zero_grads(layer);
    Tensor analytic_gx = backward(layer, cache, u);

    double worst = 0.0;

    // input components
    Tensor probe = input;
    for (std::size_t i = 0; i < probe.numel(); ++i) {
        double orig = probe.data[i];
        probe.data[i] = orig + h;
        double fp = projected_output(layer, probe, u);
        probe.data[i] = orig - h;
        double fm = projected_output(layer, probe, u);
        probe.data[i] = orig;
        double numeric = (fp - fm) / (2.0 * h);
        worst = std::max(worst, rel_error(analytic_gx.data[i], numeric));
    }

    // parameter components
    for (std::size_t pi = 0; pi < layer.params.size(); ++pi) {
        Tensor& p = layer.params[pi];
        for (std::size_t i = 0; i < p.numel(); ++i) {
            double orig = p.data[i];
            p.data[i] = orig + h;
            double fp = projected_output(layer, input, u);
            p.data[i] = orig - h;
            double fm = projected_output(layer, input, u);
            p.data[i] = orig;
            double numeric = (fp - fm) / (2.0 * h);
            worst = std::max(worst, rel_error(layer.grads[pi].data[i], numeric));
        }
    }
    zero_grads(layer);
    return worst;
}

Tensor make_kink_safe_input(const LayerSpec& spec,
                            const std::vector<std::size_t>& shape, Rng& rng,
                            double margin) {
    Tensor x = Tensor::zeros(shape);
    for (double& v : x.data) {
        double m = rng.uniform(margin, 1.0);
        v = rng.bernoulli(0.5) ? m : -m;
    }
    if (const auto* mp = std::get_if<MaxPool1dSpec>(&spec)) {
        // Separate window entries so the argmax is stable under +-h nudges.
        std::size_t channels = shape[0];
        std::size_t len = shape[1];
        std::size_t out_len = (len - mp->window) / mp->stride + 1;
        for (std::size_t c = 0; c < channels; ++c) {
            for (std::size_t i = 0; i < out_len; ++i) {
                std::size_t base = i * mp->stride;
                std::size_t best = base;
                for (std::size_t t = 1; t < mp->window; ++t) {
                    if (x.at2(c, base + t) > x.at2(c, best)) best = base + t;
                }
                x.at2(c, best) += 2.0 * margin;
            }
        }
    }
    return x;
}

}  // namespace advids::numerics
