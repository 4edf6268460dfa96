// SPDX-License-Identifier: Apache-2.0

#include "chigad/train/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace chigad::train {
namespace {

using Rng = std::mt19937_64;

Index uniform_index(Rng& rng, Index n) { return std::uniform_int_distribution<Index>(0, n - 1)(rng); }

// Draws k distinct values from [0, n) with a partial Fisher-Yates shuffle.
std::vector<Index> sample_without_replacement(Rng& rng, Index n, Index k) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index j = 0; j < k; ++j) std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(j + uniform_index(rng, n - j))]);
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

struct TypeState {
  std::vector<int> cluster;
  std::vector<std::vector<Index>> members;  // per cluster
};

}  // namespace

void SyntheticSpec::validate() const {
  if (types.empty()) throw Error("synthetic spec: no node types");
  for (const auto& t : types) {
    if (t.name.empty()) throw Error("synthetic spec: empty type name");
    if (t.count < 1) throw Error("synthetic spec: type '" + t.name + "' needs at least one node");
    if (t.feature_dim < 1) throw Error("synthetic spec: type '" + t.name + "' needs feature_dim >= 1");
  }
  const int nt = static_cast<int>(types.size());
  for (const auto& r : relations) {
    if (r.src < 0 || r.src >= nt || r.dst < 0 || r.dst >= nt) throw Error("synthetic spec: relation '" + r.name + "' has an unknown endpoint type");
    if (!(r.avg_degree >= 0.0)) throw Error("synthetic spec: relation '" + r.name + "' has a negative degree");
  }
  if (target < 0 || target >= nt) throw Error("synthetic spec: target type out of range");
  if (!(anomaly_rate >= 0.0 && anomaly_rate < 0.5)) throw Error("synthetic spec: anomaly_rate must lie in [0, 0.5)");
  if (!(feature_shift >= 0.0)) throw Error("synthetic spec: feature_shift must be >= 0");
  if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0)) throw Error("synthetic spec: rewire_prob must lie in [0, 1]");
  if (clusters < 1) throw Error("synthetic spec: clusters must be >= 1");
  if (!(homophily >= 0.0 && homophily <= 1.0)) throw Error("synthetic spec: homophily must lie in [0, 1]");
  if (!(noise >= 0.0)) throw Error("synthetic spec: noise must be >= 0");
  if (!(train_fraction > 0.0 && val_fraction >= 0.0 && train_fraction + val_fraction < 1.0)) {
    throw Error("synthetic spec: need train_fraction > 0, val_fraction >= 0 and their sum < 1");
  }
}

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec s;
  s.types = {{"paper", 450, 16}, {"author", 100, 8}, {"subject", 50, 8}};
  s.relations = {{"cites", 0, 0, 2.0, ""},
                 {"written_by", 0, 1, 3.0, "writes"},
                 {"about", 0, 2, 1.5, "covers"}};
  return s;
}

hin::HeteroGraph generate_synthetic_hin(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int nt = static_cast<int>(spec.types.size());
  std::vector<TypeState> state(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    auto& st = state[static_cast<std::size_t>(t)];
    const Index n = spec.types[static_cast<std::size_t>(t)].count;
    st.members.resize(static_cast<std::size_t>(spec.clusters));
    for (Index i = 0; i < n; ++i) {
      const int c = static_cast<int>(uniform_index(rng, spec.clusters));
      st.cluster.push_back(c);
      st.members[static_cast<std::size_t>(c)].push_back(i);
    }
  }

  // Anomalies, each with a second group its edges avoid.
  const Index n_target = spec.types[static_cast<std::size_t>(spec.target)].count;
  const auto n_anomalies = static_cast<Index>(std::llround(spec.anomaly_rate * static_cast<double>(n_target)));
  std::vector<Index> anomalies = sample_without_replacement(rng, n_target, n_anomalies);
  std::sort(anomalies.begin(), anomalies.end());
  std::vector<bool> is_anomaly(static_cast<std::size_t>(n_target), false);
  std::vector<int> decoy(static_cast<std::size_t>(n_target), -1);
  const auto& target_clusters = state[static_cast<std::size_t>(spec.target)].cluster;
  for (Index a : anomalies) {
    is_anomaly[static_cast<std::size_t>(a)] = true;
    const int own = target_clusters[static_cast<std::size_t>(a)];
    if (spec.clusters > 1) {
      const int step = 1 + static_cast<int>(uniform_index(rng, spec.clusters - 1));
      decoy[static_cast<std::size_t>(a)] = (own + step) % spec.clusters;
    }
  }

  hin::HeteroGraph g;
  g.target_type = spec.target;
  for (int t = 0; t < nt; ++t) {
    const auto& ts = spec.types[static_cast<std::size_t>(t)];
    Matrix means(spec.clusters, ts.feature_dim);
    for (Index c = 0; c < means.rows(); ++c) {
      for (Index j = 0; j < means.cols(); ++j) means(c, j) = gauss(rng);
    }
    Eigen::RowVectorXd shift(ts.feature_dim);
    for (Index j = 0; j < shift.size(); ++j) shift(j) = gauss(rng);
    hin::NodeType node_type;
    node_type.name = ts.name;
    node_type.count = ts.count;
    node_type.features.resize(ts.count, ts.feature_dim);
    for (Index i = 0; i < ts.count; ++i) {
      const int c = state[static_cast<std::size_t>(t)].cluster[static_cast<std::size_t>(i)];
      Eigen::RowVectorXd mu = means.row(c);
      if (t == spec.target && is_anomaly[static_cast<std::size_t>(i)]) {
        mu += spec.feature_shift * shift;
      }
      for (Index j = 0; j < ts.feature_dim; ++j) node_type.features(i, j) = mu(j) + spec.noise * gauss(rng);
    }
    g.node_types.push_back(std::move(node_type));
  }

  // Normal target nodes grouped by cluster, used as rewiring destinations.
  std::vector<std::vector<Index>> normal_by_cluster(static_cast<std::size_t>(spec.clusters));
  for (Index i = 0; i < n_target; ++i) {
    if (!is_anomaly[static_cast<std::size_t>(i)]) normal_by_cluster[static_cast<std::size_t>(target_clusters[static_cast<std::size_t>(i)])].push_back(i);
  }

  auto pick_in_cluster = [&](int type, int cluster) -> Index {
    const auto& members = state[static_cast<std::size_t>(type)].members[static_cast<std::size_t>(cluster)];
    if (members.empty()) return uniform_index(rng, spec.types[static_cast<std::size_t>(type)].count);
    return members[static_cast<std::size_t>(uniform_index(rng, static_cast<Index>(members.size())))];
  };
  // Endpoint of `type` for an edge leaving anomaly `a`: a node outside the
  // anomaly's own and decoy groups, normal when the type is the target.
  auto heterophilic_partner = [&](int type, Index a) -> Index {
    const int own = target_clusters[static_cast<std::size_t>(a)];
    const int dec = decoy[static_cast<std::size_t>(a)];
    std::vector<int> allowed;
    for (int c = 0; c < spec.clusters; ++c) {
      if (c != own && c != dec) allowed.push_back(c);
    }
    if (allowed.empty()) {
      for (int c = 0; c < spec.clusters; ++c) {
        if (c != own) allowed.push_back(c);
      }
    }
    if (allowed.empty()) allowed.push_back(own);
    const int c = allowed[static_cast<std::size_t>(uniform_index(rng, static_cast<Index>(allowed.size())))];
    if (type == spec.target) {
      const auto& pool = normal_by_cluster[static_cast<std::size_t>(c)];
      if (!pool.empty()) return pool[static_cast<std::size_t>(uniform_index(rng, static_cast<Index>(pool.size())))];
    }
    return pick_in_cluster(type, c);
  };

  for (const auto& rs : spec.relations) {
    const Index ns = spec.types[static_cast<std::size_t>(rs.src)].count;
    const Index nd = spec.types[static_cast<std::size_t>(rs.dst)].count;
    const auto m = static_cast<Index>(std::llround(rs.avg_degree * static_cast<double>(ns)));
    std::vector<std::pair<Index, Index>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (Index e = 0; e < m; ++e) {
      const Index u = uniform_index(rng, ns);
      const int cu = state[static_cast<std::size_t>(rs.src)].cluster[static_cast<std::size_t>(u)];
      Index v = (unit(rng) < spec.homophily) ? pick_in_cluster(rs.dst, cu) : uniform_index(rng, nd);
      Index uu = u;
      if (rs.src == spec.target && is_anomaly[static_cast<std::size_t>(uu)] && unit(rng) < spec.rewire_prob) {
        v = heterophilic_partner(rs.dst, uu);
      } else if (rs.dst == spec.target && is_anomaly[static_cast<std::size_t>(v)] && unit(rng) < spec.rewire_prob) {
        uu = heterophilic_partner(rs.src, v);
      }
      if (rs.src == rs.dst && uu == v) continue;
      edges.emplace_back(uu, v);
    }
    hin::Relation rel;
    rel.name = rs.name;
    rel.src = rs.src;
    rel.dst = rs.dst;
    rel.adjacency = hin::edges_to_adjacency(ns, nd, edges);
    g.relations.push_back(rel);
    if (!rs.reverse_name.empty()) {
      hin::Relation rev;
      rev.name = rs.reverse_name;
      rev.src = rs.dst;
      rev.dst = rs.src;
      rev.adjacency = SparseMatrix(rel.adjacency.transpose());
      g.relations.push_back(std::move(rev));
    }
  }

  g.labels.assign(static_cast<std::size_t>(n_target), hin::Label::kBenign);
  for (Index a : anomalies) g.labels[static_cast<std::size_t>(a)] = hin::Label::kAnomalous;

  // Stratified split: each class is shuffled and cut by the same fractions.
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<Index> members;
    for (Index i = 0; i < n_target; ++i) {
      if (static_cast<int>(is_anomaly[static_cast<std::size_t>(i)]) == cls) members.push_back(i);
    }
    const auto n = static_cast<Index>(members.size());
    auto order = sample_without_replacement(rng, n, n);
    const auto n_train = static_cast<Index>(std::llround(spec.train_fraction * static_cast<double>(n)));
    const auto n_val = static_cast<Index>(std::llround(spec.val_fraction * static_cast<double>(n)));
    for (Index k = 0; k < n; ++k) {
      const Index node = members[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      if (k < n_train) {
        g.splits.train.push_back(node);
      } else if (k < n_train + n_val) {
        g.splits.val.push_back(node);
      } else {
        g.splits.test.push_back(node);
      }
    }
  }
  std::sort(g.splits.train.begin(), g.splits.train.end());
  std::sort(g.splits.val.begin(), g.splits.val.end());
  std::sort(g.splits.test.begin(), g.splits.test.end());
  hin::validate(g);
  return g;
}

}  // namespace chigad::train
