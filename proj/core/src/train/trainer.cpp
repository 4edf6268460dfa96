// SPDX-License-Identifier: Apache-2.0

#include "chigad/train/trainer.hpp"

#include <cmath>
#include <string>

#include "chigad/hin/homogenize.hpp"
#include "chigad/hin/laplacian.hpp"

namespace chigad::train {
namespace {

std::vector<int> labels_of(const std::vector<Index>& nodes, const std::vector<int>& labels) {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (Index i : nodes) out.push_back(labels[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> scores_of(const Matrix& prob, const std::vector<Index>& nodes) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (Index i : nodes) out.push_back(prob(i, 1));
  return out;
}

std::vector<bool> mask_of(std::size_t n, const std::vector<Index>& nodes) {
  std::vector<bool> mask(n, false);
  for (Index i : nodes) mask[static_cast<std::size_t>(i)] = true;
  return mask;
}

void check_data(const TrainData& data, Index rows) {
  if (static_cast<Index>(data.labels.size()) != rows) {
    throw Error("training data has " + std::to_string(data.labels.size()) + " labels for " + std::to_string(rows) +
                " target nodes");
  }
  if (data.train.empty()) throw Error("training data has an empty train split");
  for (Index i : data.train) {
    if (data.labels[static_cast<std::size_t>(i)] < 0) throw Error("train split contains an unlabelled node");
  }
}

}  // namespace

const std::vector<Index>& TrainData::split(hin::SplitKind kind) const {
  switch (kind) {
    case hin::SplitKind::kTrain: return train;
    case hin::SplitKind::kVal: return val;
    case hin::SplitKind::kTest: return test;
  }
  return train;
}

TrainData make_train_data(const hin::HeteroGraph& graph) {
  TrainData d;
  for (auto l : graph.labels) d.labels.push_back(static_cast<int>(l));
  d.train = graph.splits.train;
  d.val = graph.splits.val;
  d.test = graph.splits.test;
  const auto homo = hin::degenerate_method2(graph, graph.target_type);
  d.contribution_laplacian = hin::laplacian(homo.adjacency, hin::OperatorKind::kNormalizedLaplacian).matrix;
  return d;
}

TrainData make_train_data(std::vector<int> labels, const hin::Splits& splits, const SparseMatrix& adjacency) {
  TrainData d;
  d.labels = std::move(labels);
  d.train = splits.train;
  d.val = splits.val;
  d.test = splits.test;
  d.contribution_laplacian = hin::laplacian(adjacency, hin::OperatorKind::kNormalizedLaplacian).matrix;
  return d;
}

Adam::Adam(double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (!(learning_rate >= 0.0)) throw Error("learning rate must be >= 0");
}

void Adam::step(model::ParameterSet& params, const std::vector<Matrix>& grads) {
  if (grads.size() != params.size()) throw Error("Adam: gradient count does not match parameters");
  if (m_.empty()) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      m_.push_back(Matrix::Zero(params[k].value.rows(), params[k].value.cols()));
      v_.push_back(Matrix::Zero(params[k].value.rows(), params[k].value.cols()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * grads[k];
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * grads[k].cwiseProduct(grads[k]);
    const Matrix m_hat = m_[k] / c1;
    const Matrix v_hat = v_[k] / c2;
    params[k].value -= (lr_ * m_hat.array() / (v_hat.array().sqrt() + eps_)).matrix();
  }
}

double evaluate_loss(const model::Model& model, const TrainData& data, const CcLossConfig& loss) {
  ad::Tape tape;
  const auto out = model.forward(tape);
  check_data(data, out.logits.rows());
  const auto c = node_contributions(out.representation.value(), data.contribution_laplacian, data.train);
  const auto w = cc_weights(c, data.labels, loss);
  return ad::weighted_softmax_ce(out.logits, data.labels, w, mask_of(data.labels.size(), data.train)).value()(0, 0);
}

TrainResult train(model::Model& model, const TrainData& data, const TrainConfig& config) {
  config.loss.validate();
  if (config.epochs < 1) throw Error("epochs must be >= 1");
  Adam adam(config.learning_rate);
  const auto train_mask = mask_of(data.labels.size(), data.train);
  const auto val_labels = labels_of(data.val, data.labels);

  TrainResult result;
  Vector best = model.parameters().flatten();
  double best_f1 = -1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    ad::Tape tape;
    const auto out = model.forward(tape);
    if (epoch == 1) check_data(data, out.logits.rows());

    const auto c = node_contributions(out.representation.value(), data.contribution_laplacian, data.train);
    const auto w = cc_weights(c, data.labels, config.loss);
    const ad::Var loss = ad::weighted_softmax_ce(out.logits, data.labels, w, train_mask);
    const double loss_value = loss.value()(0, 0);
    if (!std::isfinite(loss_value)) {
      throw Error("divergent loss at epoch " + std::to_string(epoch) + " (value " + std::to_string(loss_value) +
                  "); lower the learning rate");
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = loss_value;
    rec.contribution_sum = c.c.sum();
    rec.contribution_dims = c.used_dims;
    if (!data.val.empty()) {
      const Matrix prob = ad::softmax_rows(out.logits.value());
      rec.val = compute_metrics(scores_of(prob, data.val), val_labels, config.threshold);
    }
    if (rec.val.f1_macro > best_f1) {
      best_f1 = rec.val.f1_macro;
      best = model.parameters().flatten();
      result.best_epoch = epoch;
      result.best_val = rec.val;
    }
    result.history.push_back(rec);

    tape.backward(loss);
    std::vector<Matrix> grads;
    grads.reserve(out.params.size());
    for (const auto& p : out.params) grads.push_back(p.grad());
    adam.step(model.parameters(), grads);
  }
  model.parameters().assign(best);
  if (!data.test.empty()) result.test = evaluate(model, data, hin::SplitKind::kTest, config.threshold);
  return result;
}

std::vector<double> anomaly_scores(const model::Model& model, const std::vector<Index>& nodes) {
  return scores_of(model.probabilities(), nodes);
}

MetricsRecord evaluate(const model::Model& model, const TrainData& data, hin::SplitKind kind, double threshold) {
  const auto& nodes = data.split(kind);
  if (nodes.empty()) throw Error("evaluate: split is empty");
  return compute_metrics(anomaly_scores(model, nodes), labels_of(nodes, data.labels), threshold);
}

}  // namespace chigad::train
