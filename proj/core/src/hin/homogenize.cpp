// SPDX-License-Identifier: Apache-2.0

#include "chigad/hin/homogenize.hpp"

#include "chigad/hin/meta_path.hpp"

namespace chigad::hin {

HomoGraph degenerate_method1(const HeteroGraph& g) {
  HomoGraph out;
  Index offset = 0;
  for (int t = 0; t < g.type_count(); ++t) {
    out.type_offsets.push_back(offset);
    for (Index i = 0; i < g.node_types[t].count; ++i) out.back_map.push_back({t, i});
    offset += g.node_types[t].count;
  }
  std::vector<Triplet> triplets;
  for (const auto& rel : g.relations) {
    const Index src0 = out.type_offsets[rel.src];
    const Index dst0 = out.type_offsets[rel.dst];
    for (Index u = 0; u < rel.adjacency.outerSize(); ++u) {
      for (SparseMatrix::InnerIterator it(rel.adjacency, u); it; ++it) {
        triplets.emplace_back(src0 + it.row(), dst0 + it.col(), 1.0);
      }
    }
  }
  SparseMatrix a(offset, offset);
  a.setFromTriplets(triplets.begin(), triplets.end());
  out.adjacency = binarize_symmetrize(a);
  return out;
}

HomoGraph degenerate_method2(const HeteroGraph& g, int target) {
  if (target < 0 || target >= g.type_count()) {
    throw Error("target type " + std::to_string(target) + " absent from graph");
  }
  const Index n = g.node_types[target].count;
  HomoGraph out;
  out.type_offsets.assign(static_cast<std::size_t>(g.type_count()), -1);
  out.type_offsets[target] = 0;
  for (Index i = 0; i < n; ++i) out.back_map.push_back({target, i});

  SparseMatrix acc(n, n);
  struct Incidence {
    int other;
    SparseMatrix b;  // n x |V_other|
  };
  std::vector<Incidence> incident;
  for (const auto& rel : g.relations) {
    if (rel.src == target && rel.dst == target) {
      acc += rel.adjacency;
    } else if (rel.src == target) {
      incident.push_back({rel.dst, rel.adjacency});
    } else if (rel.dst == target) {
      incident.push_back({rel.src, SparseMatrix(rel.adjacency.transpose())});
    }
  }
  for (std::size_t p = 0; p < incident.size(); ++p) {
    for (std::size_t q = p; q < incident.size(); ++q) {
      if (incident[p].other != incident[q].other) continue;
      acc += SparseMatrix(incident[p].b * SparseMatrix(incident[q].b.transpose()));
    }
  }
  out.adjacency = binarize_symmetrize(acc);
  return out;
}

}  // namespace chigad::hin
