// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "chigad/hin/laplacian.hpp"
#include "chigad/model/chigad.hpp"

namespace chigad::model {

struct ChiGnnConfig {
  std::vector<int> filters{1, 3, 5, 7};
  int poly_d = 3;
  Index hidden_dim = 64;
  int mlp_layers = 2;
  ad::Activation activation = ad::Activation::kRelu;
  hin::OperatorKind op_kind = hin::OperatorKind::kNormalizedLaplacian;
  FilterMode filter_mode = FilterMode::kChiSquare;
  std::uint64_t seed = 0;
};

/// Homogeneous Chi-Square network: sum_f f(S) act(X W_in), then the MLP head.
class ChiGnnModel final : public Model {
 public:
  static ChiGnnModel build(const SparseMatrix& adjacency, Matrix features, const ChiGnnConfig& config);

  ParameterSet& parameters() override { return params_; }
  const ParameterSet& parameters() const override { return params_; }
  ForwardOutput forward(ad::Tape& tape) const override;
  ForwardOutput forward(ad::Tape& tape, const Matrix& features) const;
  std::uint64_t fingerprint() const override { return fingerprint_; }

  const std::vector<spectral::ChebyshevSeries>& filters() const { return filters_; }

 private:
  ChiGnnConfig config_;
  std::shared_ptr<const SparseMatrix> op_;
  std::vector<spectral::ChebyshevSeries> filters_;
  Matrix features_;
  ParameterSet params_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace chigad::model
