#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advids/data/dataset.hpp"
#include "advids/models/model.hpp"

namespace advids::gan {

using data::Dataset;
using models::Model;
using numerics::Tensor;

struct GanConfig {
    std::size_t noise_dim = 64;
    std::size_t epochs = 15;
    std::size_t batch_size = 32;
    double lr_g = 1e-3;
    double lr_d = 1e-3;
    std::size_t checkpoint_interval = 10;  // batches between trace rows
    double threshold = 0.5;                // real/fake decision boundary
    std::uint64_t seed = 42;
    // Feed adversarially perturbed rows into the fake stream so the
    // discriminator learns to reject them, not just generator output.
    bool fgsm_in_training = false;
};

void validate_config(const GanConfig& config);

struct TraceCheckpoint {
    std::size_t index = 0;  // 1-based, strictly increasing
    double generator_loss = 0.0;
    double discriminator_loss = 0.0;
};

struct LossTrace {
    std::vector<TraceCheckpoint> checkpoints;
};

struct GanResult {
    Model generator;
    Model discriminator;
    LossTrace trace;
};

// Alternating minimax training. Per batch the discriminator first updates on
// a real batch (target 1) plus an equally sized fake batch (target 0), then
// the generator updates through the frozen discriminator with target 1
// (non-saturating loss). When config.fgsm_in_training is set, every other
// fake slot is drawn round-robin from `fgsm_pool` instead of the generator.
// A checkpoint row is recorded every checkpoint_interval batches, so the
// trace has exactly floor(batches x epochs / interval) rows. Any non-finite
// batch loss aborts with DivergenceError naming the failing batch.
GanResult train_gan(const Dataset& real_data, const GanConfig& config,
                    const std::vector<Tensor>* fgsm_pool = nullptr);

// Divergence guard applied after every training batch: a non-finite loss
// aborts with DivergenceError naming the batch and the upcoming checkpoint.
// Clamped losses and saturating sigmoids keep ordinary training finite, so
// this defends against numeric corruption rather than bad hyperparameters.
void check_finite_losses(double d_loss, double g_loss, std::size_t batch,
                         std::size_t next_checkpoint);

struct Verdict {
    double score = 0.0;
    bool real = false;  // score >= threshold
};

// First-stage gate decision for one sample. The boundary score counts as
// real: verdict = (score >= threshold).
Verdict discriminate(const Model& discriminator, const Tensor& x,
                     double threshold);

struct DetectorEvaluation {
    // Positive class = adversarial (flagged fake).
    std::size_t true_positive = 0;   // adversarial scored < threshold
    std::size_t false_negative = 0;  // adversarial passed as real
    std::size_t true_negative = 0;   // real scored >= threshold
    std::size_t false_positive = 0;  // real flagged fake
    double adv_recall = 0.0;         // true_positive / |adv_set|
    double real_recall = 0.0;        // true_negative / |real_test|
};

DetectorEvaluation evaluate_detector(const Model& discriminator,
                                     const Dataset& real_test,
                                     const std::vector<Tensor>& adv_set,
                                     double threshold);

// CSV layout: header "checkpoint,d_loss,g_loss", one row per checkpoint.
std::string trace_to_csv(const LossTrace& trace);
LossTrace trace_from_csv(const std::string& text);
void save_trace(const LossTrace& trace, const std::string& path);
LossTrace load_trace(const std::string& path);

}  // namespace advids::gan
