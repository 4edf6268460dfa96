// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "chigad/model/model.hpp"

namespace chigad::model {

/// Checkpoint layout: one JSON header line (format, fingerprint, free-form
/// config text, parameter names and shapes, scalar count), then the flat
/// parameter vector as little-endian float64 in declaration order.
void save_checkpoint(const std::filesystem::path& path, const Model& model, const std::string& config_text);

struct CheckpointInfo {
  std::uint64_t fingerprint = 0;
  std::string config_text;
  Index scalar_count = 0;
};

/// Reads the header only.
CheckpointInfo read_checkpoint_info(const std::filesystem::path& path);

/// Loads parameters into `model`. Throws on a fingerprint (schema) mismatch,
/// a parameter-shape mismatch or a truncated file.
CheckpointInfo load_checkpoint(const std::filesystem::path& path, Model& model);

}  // namespace chigad::model
