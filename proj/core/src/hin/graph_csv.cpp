// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "chigad/hin/hetero_graph.hpp"

namespace chigad::hin {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(split_fields(line));
  }
  return rows;
}

Index to_index(const std::string& s, const std::filesystem::path& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw Error("malformed integer '" + s + "' in " + where.string());
  }
}

double to_double(const std::string& s, const std::filesystem::path& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("malformed number '" + s + "' in " + where.string());
  }
}

}  // namespace

HeteroGraph load_hetero_graph_csv(const std::filesystem::path& dir) {
  HeteroGraph g;
  struct PendingRelation {
    std::string name, src, dst;
  };
  std::vector<PendingRelation> pending;
  std::string target;

  for (const auto& row : read_rows(dir / "schema.csv")) {
    if (row.empty()) continue;
    if (row[0] == "node" && row.size() == 2) {
      g.node_types.push_back(NodeType{row[1], 0, Matrix()});
    } else if (row[0] == "relation" && row.size() == 4) {
      pending.push_back({row[1], row[2], row[3]});
    } else if (row[0] == "target" && row.size() == 2) {
      target = row[1];
    } else {
      throw Error("malformed schema.csv line starting with '" + row[0] + "'");
    }
  }
  if (target.empty()) throw Error("schema.csv has no target line");
  g.target_type = g.type_index(target);

  for (int t = 0; t < g.type_count(); ++t) {
    auto& nt = g.node_types[t];
    const auto path = dir / ("nodes_" + nt.name + ".csv");
    const auto rows = read_rows(path);
    nt.count = static_cast<Index>(rows.size());
    const Index dim = rows.empty() ? 0 : static_cast<Index>(rows.front().size()) - 3;
    if (dim < 0) throw Error("rows in " + path.string() + " need local_id,label,split");
    nt.features = Matrix::Zero(nt.count, dim);
    for (Index r = 0; r < nt.count; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (static_cast<Index>(row.size()) != dim + 3) {
        throw Error("ragged feature row " + std::to_string(r) + " in " + path.string());
      }
      if (to_index(row[0], path) != r) throw Error("node ids must be 0..n-1 in order in " + path.string());
      for (Index c = 0; c < dim; ++c) nt.features(r, c) = to_double(row[static_cast<std::size_t>(c + 3)], path);
      if (t == g.target_type) {
        const std::string& label = row[1];
        if (label.empty()) {
          g.labels.push_back(Label::kUnlabeled);
        } else if (label == "0" || label == "1") {
          g.labels.push_back(label == "1" ? Label::kAnomalous : Label::kBenign);
        } else {
          throw Error("label must be 0, 1 or empty in " + path.string());
        }
        const std::string& split = row[2];
        if (split == "train") {
          g.splits.train.push_back(r);
        } else if (split == "val") {
          g.splits.val.push_back(r);
        } else if (split == "test") {
          g.splits.test.push_back(r);
        } else if (!split.empty()) {
          throw Error("unknown split '" + split + "' in " + path.string());
        }
      } else if (!row[1].empty() || !row[2].empty()) {
        throw Error("labels/splits are only allowed on the target type (" + path.string() + ")");
      }
    }
  }

  for (const auto& p : pending) {
    Relation rel;
    rel.name = p.name;
    rel.src = g.type_index(p.src);
    rel.dst = g.type_index(p.dst);
    const auto path = dir / ("edges_" + p.name + ".csv");
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& row : read_rows(path)) {
      if (row.size() != 2) throw Error("edge rows must be u,v in " + path.string());
      edges.emplace_back(to_index(row[0], path), to_index(row[1], path));
    }
    rel.adjacency = edges_to_adjacency(g.node_types[rel.src].count, g.node_types[rel.dst].count, edges);
    g.relations.push_back(std::move(rel));
  }
  validate(g);
  return g;
}

}  // namespace chigad::hin
