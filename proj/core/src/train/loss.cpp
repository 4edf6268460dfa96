// SPDX-License-Identifier: Apache-2.0

#include "chigad/train/loss.hpp"

#include <algorithm>
#include <string>

namespace chigad::train {

void CcLossConfig::validate() const {
  if (!(high >= low && low >= 1.0)) {
    throw Error("loss config: need H >= L >= 1 (got H=" + std::to_string(high) + ", L=" + std::to_string(low) + ")");
  }
}

ContributionVector node_contributions(const Matrix& representation, const SparseMatrix& laplacian,
                                      std::span<const Index> train_nodes) {
  const Index n = representation.rows();
  if (laplacian.rows() != n || laplacian.cols() != n) throw Error("node_contributions: operator size mismatch");
  ContributionVector out;
  out.c = Vector::Zero(n);
  const Matrix lx = laplacian * representation;
  for (Index j = 0; j < representation.cols(); ++j) {
    const double denom = representation.col(j).dot(lx.col(j));
    if (denom < kContributionFloor) continue;
    out.c += representation.col(j).cwiseProduct(lx.col(j)) / denom;
    ++out.used_dims;
  }
  if (out.used_dims == 0) throw Error("contributions undefined: every feature dimension is degenerate");
  if (!train_nodes.empty()) {
    out.c_min = out.c(train_nodes.front());
    out.c_max = out.c_min;
    for (Index i : train_nodes) {
      out.c_min = std::min(out.c_min, out.c(i));
      out.c_max = std::max(out.c_max, out.c(i));
    }
  }
  return out;
}

std::vector<double> cc_weights(const ContributionVector& c, std::span<const int> labels, const CcLossConfig& config) {
  config.validate();
  if (static_cast<Index>(labels.size()) != c.c.size()) throw Error("cc_weights: label count mismatch");
  std::vector<double> w(labels.size(), 0.0);
  const double range = c.c_max - c.c_min;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) {
      w[i] = 1.0;
    } else if (labels[i] == 1) {
      if (range == 0.0) {
        w[i] = 0.5 * (config.high + config.low);
      } else {
        const double t = std::clamp((c.c_max - c.c(static_cast<Index>(i))) / range, 0.0, 1.0);
        w[i] = t * (config.high - config.low) + config.low;
      }
    }
  }
  return w;
}

}  // namespace chigad::train
