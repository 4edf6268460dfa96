// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chigad/hin/hetero_graph.hpp"

namespace chigad::train {

struct SyntheticTypeSpec {
  std::string name;
  Index count = 0;
  Index feature_dim = 0;
};

struct SyntheticRelationSpec {
  std::string name;
  int src = 0;
  int dst = 0;
  /// Edges per source node on average.
  double avg_degree = 1.0;
  /// When set, a transposed copy named reverse_name is added right after.
  std::string reverse_name;
};

/// Planted-anomaly HIN. Every node belongs to one of `clusters` latent
/// groups shared by all types; features are the per-(type, cluster) mean
/// plus Gaussian noise and edges prefer the same group with probability
/// `homophily`. Target anomalies add `feature_shift` times one Gaussian
/// direction (fixed per type) to their mean, and each incident edge is
/// redirected with probability `rewire_prob` to a normal node of an
/// unrelated group.
struct SyntheticSpec {
  std::vector<SyntheticTypeSpec> types;
  std::vector<SyntheticRelationSpec> relations;
  int target = 0;
  double anomaly_rate = 0.05;
  double feature_shift = 1.0;
  double rewire_prob = 0.5;
  int clusters = 4;
  double homophily = 0.9;
  double noise = 0.5;
  double train_fraction = 0.4;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;

  /// Throws Error naming the first invalid field.
  void validate() const;
};

/// Three types (paper 450 x 16, author 100 x 8, subject 50 x 8), citation
/// plus two bidirectional relations, 5% anomalies.
SyntheticSpec default_synthetic_spec();

/// Pure function of the spec (seed included). Splits are stratified.
hin::HeteroGraph generate_synthetic_hin(const SyntheticSpec& spec);

}  // namespace chigad::train
