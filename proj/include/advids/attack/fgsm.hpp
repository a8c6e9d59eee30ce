#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advids/data/dataset.hpp"
#include "advids/models/model.hpp"

namespace advids::attack {

using data::Dataset;
using data::FeatureSchema;
using models::Model;
using numerics::Tensor;

struct AttackConfig {
    double epsilon = 0.01;
    bool filter_successful = true;
    // Off by default: the realism analysis measures out-of-range values, so
    // adversarial features are not clipped back into [0,1].
    bool clip_to_unit = false;
};

void validate_config(const AttackConfig& config);

struct AdversarialExample {
    Tensor original;
    Tensor perturbed;  // == original + delta, componentwise
    // The applied perturbation itself. Generated examples hold exactly
    // ±ε or 0 per component; sets loaded from CSV recompute it.
    Tensor delta;
    std::size_t true_label = 0;
    std::size_t clean_pred = 0;
    std::size_t adv_pred = 0;
    bool success = false;
};

struct AttackSummary {
    std::size_t total = 0;
    std::size_t successes = 0;
    double clean_accuracy = 0.0;
    double adversarial_accuracy = 0.0;
    double success_rate = 0.0;
};

struct AttackResult {
    std::vector<AdversarialExample> examples;
    AttackSummary summary;
};

struct GroupStats {
    double mean_perturbed_count = 0.0;
    double max_perturbed_count = 0.0;
    double mean_sq_distance = 0.0;
    double max_sq_distance = 0.0;
    double mean_l2 = 0.0;
    double max_l2 = 0.0;
    double mean_linf = 0.0;
    double max_linf = 0.0;
};

struct PerturbationStats {
    GroupStats application;
    GroupStats network;
};

struct GroupValidity {
    double pct_invalid_range = 0.0;
    double pct_invalid_binary = 0.0;
    double pct_invalid_class_belonging = 0.0;
};

struct ValidityReport {
    GroupValidity application;
    GroupValidity network;
};

// Exact ∂J/∂x of the cross-entropy loss at (x, y), via the full backward
// chain. Pure: the model is copied for gradient scratch space.
Tensor input_gradient(const Model& model, const Tensor& x, std::size_t y);

// x + ε·sign(∇x J) with sign(0) = 0; no clipping unless configured.
AdversarialExample fgsm_generate(const Model& model, const Tensor& x,
                                 std::size_t y, const AttackConfig& config);

// One example per dataset row, in row order (parallel inside). Summary covers
// the whole set; the returned list keeps only successes when filtering.
AttackResult attack_batch(const Model& model, const Dataset& dataset,
                          const AttackConfig& config);

PerturbationStats perturbation_stats(const std::vector<AdversarialExample>& examples,
                                     const FeatureSchema& schema);

// Share of examples whose perturbed vector violates each realism criterion,
// per column group.
ValidityReport validity_analysis(const std::vector<AdversarialExample>& examples,
                                 const FeatureSchema& schema);

// Same criteria over the rows of an encoded dataset (e.g. schema-fit data).
ValidityReport validity_analysis(const Dataset& dataset);

void save_adversarial_csv(const std::vector<AdversarialExample>& examples,
                          const FeatureSchema& schema, const std::string& path);

std::vector<AdversarialExample> load_adversarial_csv(const std::string& path,
                                                     const FeatureSchema& schema);

// Stats/validity sidecar as canonical JSON (sorted keys, stable layout).
std::string attack_report_json(const AttackConfig& config,
                               const AttackSummary& summary,
                               const PerturbationStats& stats,
                               const ValidityReport& validity);

}  // namespace advids::attack
