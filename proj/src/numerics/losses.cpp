#include "advids/numerics/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace advids::numerics {

ScalarLoss cross_entropy_loss(const Tensor& log_probs, std::size_t label) {
    if (label >= log_probs.numel()) {
        throw DomainError("cross_entropy_loss: label " + std::to_string(label) +
                          " out of range for " + std::to_string(log_probs.numel()) +
                          " classes");
    }
    ScalarLoss r;
    r.loss = -log_probs.at(label);
    r.grad = Tensor::zeros(log_probs.shape);
    r.grad.at(label) = -1.0;
    return r;
}

BceLoss bce_loss(double prob, double target) {
    if (target != 0.0 && target != 1.0) {
        throw DomainError("bce_loss: target must be 0 or 1");
    }
    double p = std::clamp(prob, kBceClamp, 1.0 - kBceClamp);
    BceLoss r;
    r.loss = -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
    r.grad_prob = -target / p + (1.0 - target) / (1.0 - p);
    return r;
}

}  // namespace advids::numerics
