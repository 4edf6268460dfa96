// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chigad/types.hpp"

namespace chigad::hin {

enum class Label : std::int8_t { kUnlabeled = -1, kBenign = 0, kAnomalous = 1 };

struct NodeType {
  std::string name;
  Index count = 0;
  /// count x feature_dim, row r belongs to local node r.
  Matrix features;

  Index feature_dim() const { return features.cols(); }
};

/// A typed relation. adjacency is |V_src| x |V_dst| with 0/1 entries.
struct Relation {
  std::string name;
  int src = 0;
  int dst = 0;
  SparseMatrix adjacency;
};

/// Node ids are local to the target type, sorted ascending.
struct Splits {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;
};

enum class SplitKind { kTrain, kVal, kTest };

/// Heterogeneous information network with a labelled target node type.
///
/// Node order within a type is the input order. Feature widths may differ
/// per type. A single type with a single relation is a valid (homogeneous)
/// instance.
struct HeteroGraph {
  std::vector<NodeType> node_types;
  std::vector<Relation> relations;
  int target_type = 0;
  /// One entry per node of the target type.
  std::vector<Label> labels;
  Splits splits;

  int type_count() const { return static_cast<int>(node_types.size()); }
  int relation_count() const { return static_cast<int>(relations.size()); }
  Index node_count(int type) const;
  Index total_nodes() const;

  /// Throws Error if no type has this name.
  int type_index(std::string_view name) const;

  const std::vector<Index>& split(SplitKind kind) const;
  std::vector<bool> mask(SplitKind kind) const;
};

/// Checks every structural invariant; throws Error naming the first violation.
void validate(const HeteroGraph& graph);

HeteroGraph parse_hetero_graph(std::string_view json_text);
HeteroGraph load_hetero_graph(const std::filesystem::path& path);

std::string to_json_string(const HeteroGraph& graph);
void save_hetero_graph(const HeteroGraph& graph, const std::filesystem::path& path);

/// CSV ingestion. The directory holds:
///   schema.csv          lines "node,<type>", "relation,<name>,<src>,<dst>", "target,<type>"
///   nodes_<type>.csv    one row per node: local_id,label,split,f0,f1,...
///                       (label in {0,1,""}, split in {train,val,test,""})
///   edges_<relation>.csv  one row per edge: u,v
HeteroGraph load_hetero_graph_csv(const std::filesystem::path& directory);

/// Stable FNV-1a hash of the schema: type names, counts, feature widths,
/// relation names and endpoints, target type.
std::uint64_t schema_hash(const HeteroGraph& graph);

/// Builds a 0/1 sparse matrix from an edge list; duplicates collapse.
SparseMatrix edges_to_adjacency(Index rows, Index cols,
                                const std::vector<std::pair<Index, Index>>& edges);

}  // namespace chigad::hin
