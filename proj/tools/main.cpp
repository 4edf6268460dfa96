// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chigad: Chi-Square spectral anomaly detection on heterogeneous graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string checkpoint;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "Run config (key = value) or, for synth, a spec file");
    if (config_required) opt->required();
    sub->add_option("--seed", seed, "Overrides the seed in the config");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };

  auto* filters = app.add_subcommand("filters", "Chi-Square filter report");
  add_common(filters, false);
  auto* metapaths = app.add_subcommand("metapaths", "Meta-path listing, divisions and representatives");
  add_common(metapaths, true);
  auto* analyze = app.add_subcommand("analyze", "Spectral profile of every meta-path graph");
  add_common(analyze, true);
  auto* synth = app.add_subcommand("synth", "Generate a synthetic planted-anomaly graph");
  add_common(synth, true);
  auto* train = app.add_subcommand("train", "Train and write checkpoint, history and metrics");
  add_common(train, true);
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  add_common(eval, true);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint written by train")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace chigad::cli;
    auto load_config = [&](CLI::App* sub) {
      RunConfig cfg = config_path.empty() ? RunConfig::parse("") : RunConfig::load(config_path);
      if (sub->count("--seed") > 0) cfg.set_seed(seed);
      return cfg;
    };
    if (filters->parsed()) {
      cmd_filters(load_config(filters), out_dir);
    } else if (metapaths->parsed()) {
      cmd_metapaths(load_config(metapaths), out_dir);
    } else if (analyze->parsed()) {
      cmd_analyze(load_config(analyze), out_dir);
    } else if (synth->parsed()) {
      std::optional<std::uint64_t> override_seed;
      if (synth->count("--seed") > 0) override_seed = seed;
      cmd_synth(config_path, override_seed, out_dir);
    } else if (train->parsed()) {
      const auto result = cmd_train(load_config(train), out_dir);
      std::printf("best epoch %d, test auroc %.4f auprc %.4f f1_macro %.4f recall %.4f\n", result.best_epoch,
                  result.test.auroc, result.test.auprc, result.test.f1_macro, result.test.recall);
    } else if (eval->parsed()) {
      const auto m = cmd_eval(load_config(eval), checkpoint, out_dir);
      std::printf("test auroc %.4f auprc %.4f f1_macro %.4f recall %.4f\n", m.auroc, m.auprc, m.f1_macro, m.recall);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
