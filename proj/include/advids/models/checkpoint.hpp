#pragma once

#include <string>

#include "advids/models/model.hpp"

namespace advids::models {

// File layout: magic "AIDM1", u16 version, u32 JSON header length, header
// bytes, then each layer's parameter tensors as little-endian f64 blocks in
// layer order.
inline constexpr char kCheckpointMagic[5] = {'A', 'I', 'D', 'M', '1'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

void save_checkpoint(const Model& model, const std::string& path);

Model load_checkpoint(const std::string& path);

// Same, but rejects a checkpoint holding a different model kind.
Model load_checkpoint(const std::string& path, ModelKind expected);

}  // namespace advids::models
