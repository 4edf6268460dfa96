// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "chigad/hin/hetero_graph.hpp"
#include "chigad/model/model.hpp"
#include "chigad/train/loss.hpp"
#include "chigad/train/metrics.hpp"

namespace chigad::train {

/// Labels and splits of the target nodes, plus the operator the node
/// contributions are measured on.
struct TrainData {
  std::vector<int> labels;  // -1 for unlabelled
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;
  SparseMatrix contribution_laplacian;

  const std::vector<Index>& split(hin::SplitKind kind) const;
};

/// Target-type labels and splits; contributions use the normalized Laplacian
/// of the Method-2 graph.
TrainData make_train_data(const hin::HeteroGraph& graph);
/// Homogeneous variant; contributions use the normalized Laplacian of `adjacency`.
TrainData make_train_data(std::vector<int> labels, const hin::Splits& splits, const SparseMatrix& adjacency);

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 200;
  CcLossConfig loss;
  double threshold = 0.5;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double loss = 0.0;
  MetricsRecord val;
  /// sum_i c_i and the number of dimensions it should equal.
  double contribution_sum = 0.0;
  int contribution_dims = 0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  MetricsRecord best_val;
  MetricsRecord test;
};

/// Adam with full-batch steps.
class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(model::ParameterSet& params, const std::vector<Matrix>& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

/// Weighted loss of the current parameters without updating them.
double evaluate_loss(const model::Model& model, const TrainData& data, const CcLossConfig& loss);

/// Epoch loop: forward, contributions and weights from the live
/// representation, loss, validation metrics, backward, Adam step.
/// The parameters with the best validation F1-macro (first on ties) are
/// restored before the test metrics are computed. Throws on a NaN loss.
TrainResult train(model::Model& model, const TrainData& data, const TrainConfig& config);

/// Anomaly probabilities (softmax column 1) of the given target nodes.
std::vector<double> anomaly_scores(const model::Model& model, const std::vector<Index>& nodes);

MetricsRecord evaluate(const model::Model& model, const TrainData& data, hin::SplitKind kind, double threshold = 0.5);

}  // namespace chigad::train
