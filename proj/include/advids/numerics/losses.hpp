#pragma once

#include <cstddef>
#include <utility>

#include "advids/numerics/tensor.hpp"

namespace advids::numerics {

struct ScalarLoss {
    double loss;
    Tensor grad;  // wrt the loss input (log-probs)
};

// Negative log likelihood over log-probabilities. The returned grad is
// exactly -1 at `label` and 0 elsewhere; composing it with the LogSoftmax
// backward yields the usual softmax-minus-onehot input gradient.
ScalarLoss cross_entropy_loss(const Tensor& log_probs, std::size_t label);

// Probabilities are clamped to [kBceClamp, 1 - kBceClamp] before the logs.
inline constexpr double kBceClamp = 1e-12;

struct BceLoss {
    double loss;
    double grad_prob;
};

BceLoss bce_loss(double prob, double target);

}  // namespace advids::numerics
