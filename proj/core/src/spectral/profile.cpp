// SPDX-License-Identifier: Apache-2.0

#include "chigad/spectral/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "chigad/spectral/chi_square.hpp"

namespace chigad::spectral {

double s_high(const Vector& x, const hin::ShiftOperator& op) {
  if (x.size() != op.size()) throw Error("s_high: signal length does not match operator");
  const double energy = x.squaredNorm();
  if (energy == 0.0) throw Error("s_high: zero vector");
  const Vector lx = op.matrix * x;
  return x.dot(lx) / energy;
}

double graph_s_high(const hin::ShiftOperator& op, const Matrix& x) {
  if (x.rows() != op.size()) throw Error("graph_s_high: feature rows do not match operator");
  double total = 0.0;
  int used = 0;
  for (Index c = 0; c < x.cols(); ++c) {
    const Vector col = x.col(c);
    if (col.squaredNorm() == 0.0) continue;
    total += s_high(col, op);
    ++used;
  }
  if (used == 0) throw Error("graph_s_high: all-zero features");
  return total / used;
}

double graph_s_high(const hin::MetaPathGraph& graph, const Matrix& x, hin::OperatorKind kind) {
  return graph_s_high(hin::laplacian(graph.adjacency, kind), x);
}

SpectralProfile spectral_profile(const hin::ShiftOperator& op, const Matrix& x, int bands,
                                 Index eigen_cap) {
  const Index n = op.size();
  if (n > eigen_cap) {
    throw Error("spectral_profile: graph has " + std::to_string(n) +
                " nodes, above the eigendecomposition cap " + std::to_string(eigen_cap) +
                " (subsample first)");
  }
  if (bands < 1 || n < bands) throw Error("spectral_profile: need at least K nodes and K >= 1");
  if (x.rows() != n) throw Error("spectral_profile: feature rows do not match operator");

  const Matrix dense = Matrix(op.matrix);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense);
  if (solver.info() != Eigen::Success) throw Error("spectral_profile: eigendecomposition failed");

  SpectralProfile p;
  p.bands = bands;
  p.eigenvalues = solver.eigenvalues();
  const Vector summed = x.rowwise().sum();
  p.fourier_coeffs = solver.eigenvectors().transpose() * summed;
  p.energies = p.fourier_coeffs.array().square();

  const Index width = n / bands;
  p.band_energies.assign(static_cast<std::size_t>(bands), 0.0);
  for (int b = 0; b < bands; ++b) {
    const Index begin = b * width;
    const Index end = (b == bands - 1) ? n : begin + width;
    p.band_starts.push_back(begin);
    p.band_energies[static_cast<std::size_t>(b)] = p.energies.segment(begin, end - begin).sum();
  }
  p.argmax_band = static_cast<int>(
      std::max_element(p.band_energies.begin(), p.band_energies.end()) - p.band_energies.begin());
  const Index begin = p.band_starts[static_cast<std::size_t>(p.argmax_band)];
  const Index end = (p.argmax_band == bands - 1) ? n : begin + width;
  const Index count = end - begin;
  // Eigenvalues are already sorted, so the median is read off directly.
  p.band_max = (count % 2 == 1)
                   ? p.eigenvalues(begin + count / 2)
                   : 0.5 * (p.eigenvalues(begin + count / 2 - 1) + p.eigenvalues(begin + count / 2));

  bool any_signal = false;
  for (Index c = 0; c < x.cols() && !any_signal; ++c) any_signal = x.col(c).squaredNorm() > 0.0;
  p.s_high = any_signal ? graph_s_high(op, x) : 0.0;
  return p;
}

std::string_view to_string(Division d) {
  switch (d) {
    case Division::kLow: return "low";
    case Division::kMid: return "mid";
    case Division::kHigh: return "high";
  }
  return "mid";
}

DivisionSplit select_representatives(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n == 0) throw Error("select_representatives: no valid meta-path graphs");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  DivisionSplit split;
  split.labels.assign(n, Division::kMid);
  if (n < 3) {
    split.degenerate = true;
    split.representatives.push_back(order[(n - 1) / 2]);
    split.representative_divisions.push_back(Division::kMid);
    return split;
  }
  const std::size_t base = n / 3;
  const std::size_t rem = n % 3;
  // Remainders go to the later divisions.
  const std::size_t sizes[3] = {base, base + (rem >= 2 ? 1 : 0), base + (rem >= 1 ? 1 : 0)};
  std::size_t start = 0;
  for (int d = 0; d < 3; ++d) {
    const auto division = static_cast<Division>(d);
    for (std::size_t k = 0; k < sizes[d]; ++k) split.labels[order[start + k]] = division;
    split.representatives.push_back(order[start + (sizes[d] - 1) / 2]);
    split.representative_divisions.push_back(division);
    start += sizes[d];
  }
  return split;
}

DivisionSplit select_representatives(std::span<const hin::MetaPathGraph> graphs, const Matrix& x,
                                     hin::OperatorKind kind) {
  std::vector<double> scores;
  scores.reserve(graphs.size());
  for (const auto& g : graphs) scores.push_back(graph_s_high(g, x, kind));
  return select_representatives(scores);
}

int assign_filter(double band_max, std::span<const int> candidates) {
  if (candidates.empty()) throw Error("assign_filter: empty candidate set");
  int best = candidates.front();
  double best_distance = std::abs(chi_mode(best) - band_max);
  for (int i : candidates) {
    const double distance = std::abs(chi_mode(i) - band_max);
    if (distance < best_distance || (distance == best_distance && i < best)) {
      best = i;
      best_distance = distance;
    }
  }
  return best;
}

SampledGraph sample_induced_subgraph(const SparseMatrix& adjacency, const Matrix& x, Index size,
                                     std::uint64_t seed) {
  const Index n = adjacency.rows();
  SampledGraph out;
  out.nodes.resize(static_cast<std::size_t>(n));
  std::iota(out.nodes.begin(), out.nodes.end(), Index{0});
  if (size < n) {
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates keeps the draw independent of std::shuffle's implementation.
    for (Index k = 0; k < size; ++k) {
      std::uniform_int_distribution<Index> pick(k, n - 1);
      std::swap(out.nodes[static_cast<std::size_t>(k)], out.nodes[static_cast<std::size_t>(pick(rng))]);
    }
    out.nodes.resize(static_cast<std::size_t>(size));
    std::sort(out.nodes.begin(), out.nodes.end());
  }
  const Index m = static_cast<Index>(out.nodes.size());
  std::vector<Index> position(static_cast<std::size_t>(n), -1);
  for (Index k = 0; k < m; ++k) position[static_cast<std::size_t>(out.nodes[static_cast<std::size_t>(k)])] = k;
  std::vector<Triplet> triplets;
  out.features.resize(m, x.cols());
  for (Index k = 0; k < m; ++k) {
    const Index u = out.nodes[static_cast<std::size_t>(k)];
    out.features.row(k) = x.row(u);
    for (SparseMatrix::InnerIterator it(adjacency, u); it; ++it) {
      const Index v = position[static_cast<std::size_t>(it.col())];
      if (v >= 0) triplets.emplace_back(k, v, it.value());
    }
  }
  out.adjacency = SparseMatrix(m, m);
  out.adjacency.setFromTriplets(triplets.begin(), triplets.end());
  out.adjacency.makeCompressed();
  return out;
}

}  // namespace chigad::spectral
