// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "chigad/hin/hetero_graph.hpp"

namespace chigad::hin {

/// Alternating type/relation sequence o_1 -r_1-> o_2 ... -r_l-> o_{l+1}
/// with o_1 == o_{l+1}. Relations are walked in their declared direction.
struct MetaPath {
  std::vector<int> node_types;  // length l + 1
  std::vector<int> relations;   // length l

  std::size_t length() const { return relations.size(); }
  /// "A-compose-P-composed_by-A"
  std::string describe(const HeteroGraph& graph) const;

  friend bool operator==(const MetaPath&, const MetaPath&) = default;
};

/// Same-type graph induced by a meta-path on its anchor type.
struct MetaPathGraph {
  int anchor_type = 0;
  /// |V_o| x |V_o|, symmetric 0/1, zero diagonal.
  SparseMatrix adjacency;
  MetaPath path;

  bool empty() const { return adjacency.nonZeros() == 0; }
};

/// All closed schema walks anchor -> ... -> anchor with min_len <= l <= max_len,
/// ordered lexicographically by relation-id sequence.
std::vector<MetaPath> enumerate_meta_paths(const HeteroGraph& graph, int anchor, int min_len,
                                           int max_len);

/// binarize(A_{r_1} ... A_{r_l}), diagonal cleared, then united with its transpose.
MetaPathGraph materialize_meta_path_graph(const HeteroGraph& graph, const MetaPath& path);

/// Entries > 0 become 1, the diagonal is dropped, and the result is united
/// with its transpose. Input must be square.
SparseMatrix binarize_symmetrize(const SparseMatrix& a);

}  // namespace chigad::hin
