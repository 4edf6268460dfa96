// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "chigad/hin/hetero_graph.hpp"

namespace chigad::hin {

struct NodeRef {
  int type = 0;
  Index local = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// Homogeneous view of (part of) a HIN: symmetric 0/1 adjacency without
/// self-loops, plus the map from global row back to (type, local id).
struct HomoGraph {
  SparseMatrix adjacency;
  std::vector<NodeRef> back_map;
  /// Global row of local node 0 for each original type; -1 when the type is absent.
  std::vector<Index> type_offsets;

  Index size() const { return adjacency.rows(); }
};

/// Method 1: every node of every type; (u,v) is an edge iff some relation has it.
HomoGraph degenerate_method1(const HeteroGraph& graph);

/// Method 2: target-type nodes only. Edges come from target-target relations
/// and from common neighbours of a non-target type through any pair of
/// relations incident to the target type.
HomoGraph degenerate_method2(const HeteroGraph& graph, int target);

}  // namespace chigad::hin
