// SPDX-License-Identifier: Apache-2.0

#include "chigad/hin/meta_path.hpp"

#include <algorithm>

namespace chigad::hin {
namespace {

SparseMatrix binarize(const SparseMatrix& a) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.value() > 0.0) triplets.emplace_back(it.row(), it.col(), 1.0);
    }
  }
  SparseMatrix out(a.rows(), a.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

void extend(const HeteroGraph& g, int anchor, int min_len, int max_len, MetaPath& current,
            std::vector<MetaPath>& out) {
  const int here = current.node_types.back();
  const int len = static_cast<int>(current.length());
  if (len >= min_len && here == anchor && len > 0) out.push_back(current);
  if (len == max_len) return;
  for (int r = 0; r < g.relation_count(); ++r) {
    if (g.relations[r].src != here) continue;
    current.relations.push_back(r);
    current.node_types.push_back(g.relations[r].dst);
    extend(g, anchor, min_len, max_len, current, out);
    current.relations.pop_back();
    current.node_types.pop_back();
  }
}

}  // namespace

std::string MetaPath::describe(const HeteroGraph& g) const {
  std::string s = g.node_types.at(node_types.front()).name;
  for (std::size_t k = 0; k < relations.size(); ++k) {
    s += "-" + g.relations.at(relations[k]).name + "-" + g.node_types.at(node_types[k + 1]).name;
  }
  return s;
}

std::vector<MetaPath> enumerate_meta_paths(const HeteroGraph& g, int anchor, int min_len,
                                           int max_len) {
  if (anchor < 0 || anchor >= g.type_count()) {
    throw Error("anchor type " + std::to_string(anchor) + " not in graph");
  }
  if (min_len < 1 || min_len > max_len) {
    throw Error("meta-path length range must satisfy 1 <= min_len <= max_len");
  }
  std::vector<MetaPath> out;
  MetaPath current;
  current.node_types.push_back(anchor);
  extend(g, anchor, min_len, max_len, current, out);
  std::stable_sort(out.begin(), out.end(), [](const MetaPath& a, const MetaPath& b) {
    return std::lexicographical_compare(a.relations.begin(), a.relations.end(),
                                        b.relations.begin(), b.relations.end());
  });
  return out;
}

MetaPathGraph materialize_meta_path_graph(const HeteroGraph& g, const MetaPath& path) {
  if (path.relations.empty() || path.node_types.size() != path.relations.size() + 1) {
    throw Error("meta-path must have l relations and l+1 node types");
  }
  if (path.node_types.front() != path.node_types.back()) {
    throw Error("meta-path must start and end on the same node type");
  }
  for (std::size_t k = 0; k < path.relations.size(); ++k) {
    const int r = path.relations[k];
    if (r < 0 || r >= g.relation_count()) throw Error("meta-path uses an unknown relation");
    const auto& rel = g.relations[r];
    if (rel.src != path.node_types[k] || rel.dst != path.node_types[k + 1]) {
      throw Error("meta-path step " + std::to_string(k) + " is not a schema edge");
    }
  }

  SparseMatrix product = g.relations[path.relations.front()].adjacency;
  for (std::size_t k = 1; k < path.relations.size(); ++k) {
    const SparseMatrix& next = g.relations[path.relations[k]].adjacency;
    if (product.cols() != next.rows()) {
      throw Error("dimension mismatch along meta-path chain at step " + std::to_string(k));
    }
    product = binarize(SparseMatrix(product * next));
  }
  if (product.rows() != product.cols()) {
    throw Error("dimension mismatch: meta-path product is not square");
  }
  return MetaPathGraph{path.node_types.front(), binarize_symmetrize(product), path};
}

SparseMatrix binarize_symmetrize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw Error("binarize_symmetrize needs a square matrix");
  std::vector<Triplet> triplets;
  triplets.reserve(2 * static_cast<std::size_t>(a.nonZeros()));
  for (Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.value() > 0.0 && it.row() != it.col()) {
        triplets.emplace_back(it.row(), it.col(), 1.0);
        triplets.emplace_back(it.col(), it.row(), 1.0);
      }
    }
  }
  SparseMatrix out(a.rows(), a.cols());
  out.setFromTriplets(triplets.begin(), triplets.end(), [](double, double) { return 1.0; });
  out.makeCompressed();
  return out;
}

}  // namespace chigad::hin
