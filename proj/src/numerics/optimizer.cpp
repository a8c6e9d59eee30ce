#include "advids/numerics/optimizer.hpp"

#include <cmath>
#include <string>

namespace advids::numerics {

Optimizer::Optimizer(const OptimizerConfig& config) : cfg_(config) {
    if (cfg_.lr <= 0.0) {
        throw ConfigError("optimizer: lr must be > 0, got " + std::to_string(cfg_.lr));
    }
    if (cfg_.kind == OptimizerKind::Adam) {
        if (cfg_.beta1 < 0.0 || cfg_.beta1 >= 1.0 || cfg_.beta2 < 0.0 || cfg_.beta2 >= 1.0) {
            throw ConfigError("optimizer: betas must be in [0, 1)");
        }
        if (cfg_.eps <= 0.0) throw ConfigError("optimizer: eps must be > 0");
    }
}

void Optimizer::step(std::vector<LayerState>& layers) {
    if (cfg_.kind == OptimizerKind::Adam && !initialized_) {
        m_.resize(layers.size());
        v_.resize(layers.size());
        for (std::size_t li = 0; li < layers.size(); ++li) {
            for (const Tensor& p : layers[li].params) {
                m_[li].push_back(Tensor::zeros(p.shape));
                v_[li].push_back(Tensor::zeros(p.shape));
            }
        }
        initialized_ = true;
    }
    ++t_;
    if (cfg_.kind == OptimizerKind::Sgd) {
        for (LayerState& layer : layers) {
            for (std::size_t pi = 0; pi < layer.params.size(); ++pi) {
                Tensor& p = layer.params[pi];
                Tensor& g = layer.grads[pi];
                for (std::size_t i = 0; i < p.numel(); ++i) {
                    p.data[i] -= cfg_.lr * g.data[i];
                }
            }
        }
    } else {
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t li = 0; li < layers.size(); ++li) {
            LayerState& layer = layers[li];
            for (std::size_t pi = 0; pi < layer.params.size(); ++pi) {
                Tensor& p = layer.params[pi];
                Tensor& g = layer.grads[pi];
                Tensor& m = m_[li][pi];
                Tensor& v = v_[li][pi];
                for (std::size_t i = 0; i < p.numel(); ++i) {
                    m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * g.data[i];
                    v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * g.data[i] * g.data[i];
                    double mhat = m.data[i] / bc1;
                    double vhat = v.data[i] / bc2;
                    p.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
                }
            }
        }
    }
    for (LayerState& layer : layers) zero_grads(layer);
}

}  // namespace advids::numerics
