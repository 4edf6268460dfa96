// SPDX-License-Identifier: Apache-2.0

#include "chigad/hin/laplacian.hpp"

#include <cmath>
#include <string>

namespace chigad::hin {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kNormalizedLaplacian: return "normalized";
    case OperatorKind::kUnnormalizedLaplacian: return "unnormalized";
    case OperatorKind::kAdjacency: return "adjacency";
  }
  return "normalized";
}

OperatorKind parse_operator_kind(std::string_view text) {
  if (text == "normalized") return OperatorKind::kNormalizedLaplacian;
  if (text == "unnormalized") return OperatorKind::kUnnormalizedLaplacian;
  if (text == "adjacency") return OperatorKind::kAdjacency;
  throw Error("unknown operator kind '" + std::string(text) + "'");
}

ShiftOperator laplacian(const SparseMatrix& a, OperatorKind kind) {
  if (a.rows() != a.cols()) throw Error("asymmetric input: adjacency is not square");
  const SparseMatrix at = a.transpose();
  if ((a - at).norm() > 1e-12 * std::max(1.0, a.norm())) {
    throw Error("asymmetric input: adjacency must be symmetric");
  }
  const Index n = a.rows();
  Vector degree = Vector::Zero(n);
  for (Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.value() < 0.0) throw Error("adjacency entries must be nonnegative");
      degree(r) += it.value();
    }
  }

  ShiftOperator op;
  op.kind = kind;
  if (kind == OperatorKind::kAdjacency) {
    op.matrix = a;
    op.matrix.makeCompressed();
    return op;
  }

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros() + n));
  if (kind == OperatorKind::kUnnormalizedLaplacian) {
    for (Index r = 0; r < n; ++r) {
      if (degree(r) != 0.0) triplets.emplace_back(r, r, degree(r));
      for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
        triplets.emplace_back(r, it.col(), -it.value());
      }
    }
  } else {
    Vector inv_sqrt = Vector::Zero(n);
    for (Index r = 0; r < n; ++r) {
      if (degree(r) > 0.0) inv_sqrt(r) = 1.0 / std::sqrt(degree(r));
    }
    for (Index r = 0; r < n; ++r) {
      triplets.emplace_back(r, r, 1.0);
      for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
        triplets.emplace_back(r, it.col(), -it.value() * inv_sqrt(r) * inv_sqrt(it.col()));
      }
    }
  }
  op.matrix = SparseMatrix(n, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  return op;
}

}  // namespace chigad::hin
