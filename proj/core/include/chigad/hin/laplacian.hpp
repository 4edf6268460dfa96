// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "chigad/types.hpp"

namespace chigad::hin {

enum class OperatorKind { kNormalizedLaplacian, kUnnormalizedLaplacian, kAdjacency };

std::string_view to_string(OperatorKind kind);
/// Accepts "normalized", "unnormalized", "adjacency".
OperatorKind parse_operator_kind(std::string_view text);

struct ShiftOperator {
  SparseMatrix matrix;
  OperatorKind kind = OperatorKind::kNormalizedLaplacian;

  Index size() const { return matrix.rows(); }
};

/// L = D - A, or L = I - D^{-1/2} A D^{-1/2} where zero-degree nodes get an
/// identity row, or S = A. Throws on asymmetric or negative input.
ShiftOperator laplacian(const SparseMatrix& adjacency,
                        OperatorKind kind = OperatorKind::kNormalizedLaplacian);

}  // namespace chigad::hin
