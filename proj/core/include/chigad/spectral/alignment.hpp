// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "chigad/hin/laplacian.hpp"

namespace chigad::spectral {

struct AlignmentSearchResult {
  Vector weights;
  double s_high = 0.0;
};

/// Searches weight vectors w maximizing s_high(signals * w).
///
/// Starts from the best single signal, then from `trials` random Gaussian
/// vectors; every start is refined by exact line maximization over
/// span{w, e_j} for each coordinate j until a sweep stops improving.
/// Used to check that a linear combination of k signals reaches the largest
/// individual high-frequency area.
AlignmentSearchResult theorem1_search(const Matrix& signals, const hin::ShiftOperator& op, int trials,
                                      std::uint64_t seed);

}  // namespace chigad::spectral
