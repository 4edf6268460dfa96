// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "chigad/model/chigad.hpp"
#include "chigad/train/synthetic.hpp"
#include "chigad/train/trainer.hpp"

namespace chigad::cli {

/// "key = value" lines; '#' starts a comment. Duplicate keys are errors.
std::map<std::string, std::string> parse_key_values(std::string_view text);

struct RunConfig {
  /// Graph JSON file or CSV directory; relative paths resolve against the
  /// config file's directory.
  std::filesystem::path graph;
  model::ModelConfig model;
  train::TrainConfig train;
  std::uint64_t seed = 0;

  /// Unknown keys and invalid values throw Error.
  static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  void set_seed(std::uint64_t value);
  /// One "key = value" line per field in a fixed order (no graph path).
  std::string canonical() const;
  void validate() const;
};

train::SyntheticSpec parse_synthetic_spec(std::string_view text);
train::SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);
std::string canonical(const train::SyntheticSpec& spec);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace chigad::cli
