// SPDX-License-Identifier: Apache-2.0

#include "chigad/hin/hetero_graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "chigad/hash.hpp"
#include "json.hpp"

namespace chigad::hin {

using nlohmann::json;

Index HeteroGraph::node_count(int type) const {
  if (type < 0 || type >= type_count()) {
    throw Error("node type index " + std::to_string(type) + " out of range");
  }
  return node_types[type].count;
}

Index HeteroGraph::total_nodes() const {
  Index total = 0;
  for (const auto& t : node_types) total += t.count;
  return total;
}

int HeteroGraph::type_index(std::string_view name) const {
  for (int i = 0; i < type_count(); ++i) {
    if (node_types[i].name == name) return i;
  }
  throw Error("unknown node type '" + std::string(name) + "'");
}

const std::vector<Index>& HeteroGraph::split(SplitKind kind) const {
  switch (kind) {
    case SplitKind::kTrain: return splits.train;
    case SplitKind::kVal: return splits.val;
    case SplitKind::kTest: return splits.test;
  }
  return splits.train;
}

std::vector<bool> HeteroGraph::mask(SplitKind kind) const {
  std::vector<bool> out(labels.size(), false);
  for (Index id : split(kind)) out[static_cast<std::size_t>(id)] = true;
  return out;
}

void validate(const HeteroGraph& g) {
  if (g.node_types.empty()) throw Error("graph has no node types");
  for (std::size_t i = 0; i < g.node_types.size(); ++i) {
    const auto& t = g.node_types[i];
    if (t.count < 0) throw Error("node type '" + t.name + "' has negative count");
    if (t.features.rows() != t.count) {
      throw Error("node type '" + t.name + "' feature rows do not match count");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.node_types[j].name == t.name) throw Error("duplicate node type '" + t.name + "'");
    }
  }
  for (const auto& r : g.relations) {
    if (r.src < 0 || r.src >= g.type_count() || r.dst < 0 || r.dst >= g.type_count()) {
      throw Error("relation '" + r.name + "' references an unknown node type");
    }
    if (r.adjacency.rows() != g.node_types[r.src].count ||
        r.adjacency.cols() != g.node_types[r.dst].count) {
      throw Error("relation '" + r.name + "' adjacency shape does not match endpoint types");
    }
  }
  if (g.target_type < 0 || g.target_type >= g.type_count()) {
    throw Error("target type out of range");
  }
  const Index n_target = g.node_types[g.target_type].count;
  if (static_cast<Index>(g.labels.size()) != n_target) {
    throw Error("missing target-type labels: expected " + std::to_string(n_target) +
                " entries, got " + std::to_string(g.labels.size()));
  }
  std::vector<int> owner(static_cast<std::size_t>(n_target), -1);
  const SplitKind kinds[] = {SplitKind::kTrain, SplitKind::kVal, SplitKind::kTest};
  for (int k = 0; k < 3; ++k) {
    for (Index id : g.split(kinds[k])) {
      if (id < 0 || id >= n_target) throw Error("split id " + std::to_string(id) + " out of range");
      auto& slot = owner[static_cast<std::size_t>(id)];
      if (slot != -1) throw Error("mask overlap at target node " + std::to_string(id));
      slot = k;
      if (g.labels[static_cast<std::size_t>(id)] == Label::kUnlabeled) {
        throw Error("missing target-type labels: split node " + std::to_string(id) +
                    " is unlabeled");
      }
    }
  }
}

SparseMatrix edges_to_adjacency(Index rows, Index cols,
                                const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Triplet> triplets;
  triplets.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= rows || v < 0 || v >= cols) {
      throw Error("dangling endpoint (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    triplets.emplace_back(u, v, 1.0);
  }
  SparseMatrix a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end(), [](double, double) { return 1.0; });
  a.makeCompressed();
  return a;
}

namespace {

std::vector<Index> parse_ids(const json& node, const char* what) {
  std::vector<Index> ids;
  if (node.is_null()) return ids;
  if (!node.is_array()) throw Error(std::string("splits.") + what + " must be an array");
  for (const auto& v : node) ids.push_back(v.get<Index>());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(std::string("mask overlap: duplicate id in splits.") + what);
  }
  return ids;
}

HeteroGraph from_json(const json& doc) {
  HeteroGraph g;
  const auto& types = doc.at("node_types");
  if (!types.is_array()) throw Error("node_types must be an array");
  for (const auto& t : types) {
    NodeType nt;
    nt.name = t.at("name").get<std::string>();
    nt.count = t.at("count").get<Index>();
    const Index dim = t.value("feature_dim", Index{0});
    if (nt.count < 0 || dim < 0) throw Error("negative count or feature_dim in '" + nt.name + "'");
    nt.features = Matrix::Zero(nt.count, dim);
    if (t.contains("features")) {
      const auto& rows = t.at("features");
      if (!rows.is_array() || static_cast<Index>(rows.size()) != nt.count) {
        throw Error("features of '" + nt.name + "' must have one row per node");
      }
      for (Index r = 0; r < nt.count; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
          throw Error("feature row " + std::to_string(r) + " of '" + nt.name +
                      "' does not have feature_dim entries");
        }
        for (Index c = 0; c < dim; ++c) nt.features(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
    } else if (dim > 0) {
      throw Error("node type '" + nt.name + "' declares feature_dim but no features");
    }
    g.node_types.push_back(std::move(nt));
  }

  for (const auto& r : doc.at("relations")) {
    Relation rel;
    rel.name = r.at("name").get<std::string>();
    rel.src = g.type_index(r.at("src").get<std::string>());
    rel.dst = g.type_index(r.at("dst").get<std::string>());
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& e : r.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error("edge in '" + rel.name + "' is not a pair");
      edges.emplace_back(e[0].get<Index>(), e[1].get<Index>());
    }
    try {
      rel.adjacency = edges_to_adjacency(g.node_types[rel.src].count, g.node_types[rel.dst].count, edges);
    } catch (const Error& err) {
      throw Error(std::string(err.what()) + " in relation '" + rel.name + "'");
    }
    g.relations.push_back(std::move(rel));
  }

  g.target_type = g.type_index(doc.at("target_type").get<std::string>());
  const Index n_target = g.node_types[g.target_type].count;
  if (!doc.contains("labels")) throw Error("missing target-type labels");
  for (const auto& l : doc.at("labels")) {
    if (l.is_null()) {
      g.labels.push_back(Label::kUnlabeled);
    } else {
      const int v = l.get<int>();
      if (v != 0 && v != 1) throw Error("labels must be 0, 1 or null");
      g.labels.push_back(v == 1 ? Label::kAnomalous : Label::kBenign);
    }
  }
  if (static_cast<Index>(g.labels.size()) != n_target) {
    throw Error("missing target-type labels: expected " + std::to_string(n_target));
  }
  if (doc.contains("splits")) {
    const auto& s = doc.at("splits");
    g.splits.train = parse_ids(s.value("train", json()), "train");
    g.splits.val = parse_ids(s.value("val", json()), "val");
    g.splits.test = parse_ids(s.value("test", json()), "test");
  }
  validate(g);
  return g;
}

}  // namespace

HeteroGraph parse_hetero_graph(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed graph file: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed graph file: ") + e.what());
  }
}

HeteroGraph load_hetero_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_hetero_graph(buffer.str());
}

std::string to_json_string(const HeteroGraph& g) {
  json doc;
  doc["node_types"] = json::array();
  for (const auto& t : g.node_types) {
    json jt;
    jt["name"] = t.name;
    jt["count"] = t.count;
    jt["feature_dim"] = t.feature_dim();
    json rows = json::array();
    for (Index r = 0; r < t.count; ++r) {
      json row = json::array();
      for (Index c = 0; c < t.feature_dim(); ++c) row.push_back(t.features(r, c));
      rows.push_back(std::move(row));
    }
    jt["features"] = std::move(rows);
    doc["node_types"].push_back(std::move(jt));
  }
  doc["relations"] = json::array();
  for (const auto& r : g.relations) {
    json jr;
    jr["name"] = r.name;
    jr["src"] = g.node_types[r.src].name;
    jr["dst"] = g.node_types[r.dst].name;
    json edges = json::array();
    for (Index u = 0; u < r.adjacency.outerSize(); ++u) {
      for (SparseMatrix::InnerIterator it(r.adjacency, u); it; ++it) {
        edges.push_back(json::array({it.row(), it.col()}));
      }
    }
    jr["edges"] = std::move(edges);
    doc["relations"].push_back(std::move(jr));
  }
  doc["target_type"] = g.node_types[g.target_type].name;
  json labels = json::array();
  for (Label l : g.labels) {
    if (l == Label::kUnlabeled) {
      labels.push_back(nullptr);
    } else {
      labels.push_back(l == Label::kAnomalous ? 1 : 0);
    }
  }
  doc["labels"] = std::move(labels);
  doc["splits"] = {{"train", g.splits.train}, {"val", g.splits.val}, {"test", g.splits.test}};
  return doc.dump();
}

void save_hetero_graph(const HeteroGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph file " + path.string());
  out << to_json_string(g) << '\n';
}

std::uint64_t schema_hash(const HeteroGraph& g) {
  Fnv1a h;
  h.add("types");
  for (const auto& t : g.node_types) h.add(t.name).add(t.count).add(t.feature_dim());
  h.add("relations");
  for (const auto& r : g.relations) h.add(r.name).add(std::int64_t{r.src}).add(std::int64_t{r.dst});
  h.add("target").add(std::int64_t{g.target_type});
  return h.value();
}

}  // namespace chigad::hin
