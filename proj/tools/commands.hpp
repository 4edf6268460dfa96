// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>

#include "run_config.hpp"

namespace chigad::cli {

hin::HeteroGraph load_graph(const std::filesystem::path& path);

/// filters.csv / filters.json: one entry per candidate index.
void cmd_filters(const RunConfig& config, const std::filesystem::path& out);

/// metapaths.csv / metapaths.json. Throws when no meta-path graph has an edge.
void cmd_metapaths(const RunConfig& config, const std::filesystem::path& out);

/// analyze.json / analyze.csv: spectral profile of every valid meta-path graph.
void cmd_analyze(const RunConfig& config, const std::filesystem::path& out);

/// graph.json from a synthetic spec file; `seed` overrides the spec seed.
void cmd_synth(const std::filesystem::path& spec_file, std::optional<std::uint64_t> seed,
               const std::filesystem::path& out);

/// model.ckpt, history.csv, metrics.json, roc.csv, pr.csv.
train::TrainResult cmd_train(const RunConfig& config, const std::filesystem::path& out);

/// eval.json with the test metrics of a saved checkpoint.
train::MetricsRecord cmd_eval(const RunConfig& config, const std::filesystem::path& checkpoint,
                              const std::filesystem::path& out);

}  // namespace chigad::cli
