#pragma once

#include <cstdint>
#include <vector>

#include "advids/numerics/layers.hpp"

namespace advids::numerics {

enum class OptimizerKind { Sgd, Adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Holds Adam moment state per parameter tensor; grads are zeroed after
// every step.
class Optimizer {
public:
    explicit Optimizer(const OptimizerConfig& config);

    void step(std::vector<LayerState>& layers);

    std::uint64_t step_count() const { return t_; }

private:
    OptimizerConfig cfg_;
    std::uint64_t t_ = 0;
    bool initialized_ = false;
    std::vector<std::vector<Tensor>> m_;
    std::vector<std::vector<Tensor>> v_;
};

}  // namespace advids::numerics
