// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "chigad/types.hpp"

namespace chigad::train {

struct CcLossConfig {
  double high = 2.2;  // H
  double low = 1.9;   // L

  /// Throws unless H >= L >= 1.
  void validate() const;
};

inline constexpr double kContributionFloor = 1e-12;

struct ContributionVector {
  /// One entry per target node (all of them, so the per-dimension
  /// decomposition identity can be checked).
  Vector c;
  double c_min = 0.0;  // over the train set
  double c_max = 0.0;
  /// Feature dimensions that passed the denominator floor.
  int used_dims = 0;
};

/// c_i = sum_j x_ji (L x_j)_i / (x_j^T L x_j) over columns j with
/// x_j^T L x_j >= kContributionFloor. c_min/c_max span `train_nodes`.
/// Throws "contributions undefined" when every column is skipped.
ContributionVector node_contributions(const Matrix& representation, const SparseMatrix& laplacian,
                                      std::span<const Index> train_nodes);

/// Benign (label 0) -> 1. Anomaly -> (c_max - c_i)/(c_max - c_min) (H - L) + L,
/// or (H + L)/2 when c_max == c_min. Unlabelled nodes get 0.
std::vector<double> cc_weights(const ContributionVector& c, std::span<const int> labels, const CcLossConfig& config);

}  // namespace chigad::train
