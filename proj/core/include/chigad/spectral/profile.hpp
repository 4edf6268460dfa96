// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "chigad/hin/laplacian.hpp"
#include "chigad/hin/meta_path.hpp"

namespace chigad::spectral {

/// High-frequency area x^T L x / x^T x. Throws on a zero vector.
double s_high(const Vector& x, const hin::ShiftOperator& op);

/// Mean of s_high over the nonzero columns of x. Throws if every column is zero.
double graph_s_high(const hin::ShiftOperator& op, const Matrix& x);
double graph_s_high(const hin::MetaPathGraph& graph, const Matrix& x,
                    hin::OperatorKind kind = hin::OperatorKind::kNormalizedLaplacian);

inline constexpr Index kDefaultEigenCap = 3000;

/// Spectral energy of the column-summed signal on one graph.
struct SpectralProfile {
  Vector eigenvalues;     // ascending
  Vector fourier_coeffs;  // u_j^T sum_k x^k
  Vector energies;        // squared coefficients
  std::vector<double> band_energies;
  /// First eigenvalue index of each band; band b spans [start_b, start_{b+1}).
  std::vector<Index> band_starts;
  int argmax_band = 0;
  /// Median eigenvalue of the highest-energy band.
  double band_max = 0.0;
  double s_high = 0.0;
  int bands = 0;
};

/// Dense eigendecomposition of `op`, K contiguous equal-count bands over the
/// sorted eigenvalues (remainder to the last band). Throws if the operator is
/// larger than `eigen_cap` or has fewer than K nodes.
SpectralProfile spectral_profile(const hin::ShiftOperator& op, const Matrix& x, int bands,
                                 Index eigen_cap = kDefaultEigenCap);

enum class Division { kLow = 0, kMid = 1, kHigh = 2 };
std::string_view to_string(Division d);

struct DivisionSplit {
  /// Per input graph.
  std::vector<Division> labels;
  /// Input index of the representative of each division, low/mid/high order;
  /// a single entry in degenerate mode.
  std::vector<std::size_t> representatives;
  std::vector<Division> representative_divisions;
  bool degenerate = false;
};

/// Ranks by score ascending (ties by input order), splits into three
/// contiguous divisions (remainders to the later ones) and picks the lower
/// median of each. Fewer than three scores -> one "mid" division.
DivisionSplit select_representatives(std::span<const double> scores);

/// Same, scoring each graph with graph_s_high.
DivisionSplit select_representatives(std::span<const hin::MetaPathGraph> graphs, const Matrix& x,
                                     hin::OperatorKind kind = hin::OperatorKind::kNormalizedLaplacian);

/// Candidate whose mode is nearest to band_max; ties go to the smaller index.
int assign_filter(double band_max, std::span<const int> candidates);

struct SampledGraph {
  SparseMatrix adjacency;
  Matrix features;
  std::vector<Index> nodes;  // sorted original ids
};

/// Uniform seed-controlled induced subgraph of `size` nodes (all nodes when
/// the graph is already small enough).
SampledGraph sample_induced_subgraph(const SparseMatrix& adjacency, const Matrix& x, Index size,
                                     std::uint64_t seed);

}  // namespace chigad::spectral
