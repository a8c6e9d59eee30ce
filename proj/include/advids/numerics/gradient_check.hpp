#pragma once

#include "advids/numerics/layers.hpp"
#include "advids/numerics/rng.hpp"

namespace advids::numerics {

// Compares the analytic backward of `layer` at `input` against central
// finite differences over every parameter and input component, using a
// random projection of the output as the checked scalar. Returns the worst
// relative error |a - n| / max(1e-8, |a| + |n|).
//
// For kinked layers (ReLU, MaxPool1d) the caller must supply an input away
// from the kinks; see make_kink_safe_input.
double gradient_check(LayerState& layer, const Tensor& input, Rng& rng,
                      double h = 1e-5);

// Draws an input of the given shape with every coordinate at least
// `margin` away from zero and, within each pooling window, a clear winner.
Tensor make_kink_safe_input(const LayerSpec& spec,
                            const std::vector<std::size_t>& shape, Rng& rng,
                            double margin = 1e-2);

}  // namespace advids::numerics
