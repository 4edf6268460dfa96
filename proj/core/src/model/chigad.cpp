// SPDX-License-Identifier: Apache-2.0

#include "chigad/model/chigad.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "chigad/hash.hpp"
#include "chigad/hin/laplacian.hpp"
#include "chigad/spectral/profile.hpp"

namespace chigad::model {
namespace {

Matrix coefficient_column(const spectral::ChebyshevSeries& poly) {
  const auto& c = poly.coefficients();
  Matrix col(static_cast<Index>(c.size()), 1);
  for (std::size_t k = 0; k < c.size(); ++k) col(static_cast<Index>(k), 0) = c[k];
  return col;
}

int max_degree_for(const std::vector<int>& indices, int d) {
  int top = 1;
  for (int i : indices) top = std::max(top, i);
  return top - 1 + d;
}

}  // namespace

std::string_view to_string(FilterMode mode) {
  return mode == FilterMode::kChiSquare ? "chi" : "lowpass";
}

FilterMode parse_filter_mode(std::string_view text) {
  if (text == "chi") return FilterMode::kChiSquare;
  if (text == "lowpass") return FilterMode::kLowPass;
  throw Error("unknown filter mode '" + std::string(text) + "' (expected chi or lowpass)");
}

void ModelConfig::validate() const {
  if (candidates.empty()) throw Error("config: candidates must not be empty");
  if (meta_filters.empty()) throw Error("config: meta_filters must not be empty");
  for (int i : candidates) {
    if (i < 1) throw Error("config: candidate filter index must be >= 1");
  }
  for (int i : meta_filters) {
    if (i < 1) throw Error("config: meta filter index must be >= 1");
  }
  if (bands < 1) throw Error("config: bands must be >= 1");
  if (!(w_d > 0.0)) throw Error("config: w_d must be positive");
  if (poly_d < 0) throw Error("config: poly_d must be >= 0");
  if (aligned_dim < 1 || hidden_dim < 1) throw Error("config: d_a and hidden must be >= 1");
  if (mlp_layers < 1) throw Error("config: mlp_layers must be >= 1");
  if (path_min < 1 || path_max < path_min) throw Error("config: need 1 <= path_min <= path_max");
  if (eigen_cap < 2) throw Error("config: eigen_cap must be >= 2");
  if (max_filter_degree < 1) throw Error("config: max_filter_degree must be >= 1");
  if (filter_mode == FilterMode::kChiSquare) {
    const int worst = std::max(max_degree_for(candidates, poly_d), max_degree_for(meta_filters, poly_d));
    if (worst > max_filter_degree) {
      throw Error("config: filter degree " + std::to_string(worst) + " exceeds max_filter_degree " +
                  std::to_string(max_filter_degree));
    }
  }
}

spectral::ChebyshevSeries low_pass_filter() {
  const double monomial[] = {1.0, -0.5};
  return spectral::ChebyshevSeries::from_monomial(monomial);
}

MultiGraphFilterBank build_filter_bank(const hin::HeteroGraph& graph, int type, const ModelConfig& config) {
  MultiGraphFilterBank bank;
  bank.type = type;
  const auto& node_type = graph.node_types.at(static_cast<std::size_t>(type));
  const Matrix& x = node_type.features;

  std::vector<hin::MetaPathGraph> valid;
  for (const auto& path : hin::enumerate_meta_paths(graph, type, config.path_min, config.path_max)) {
    auto materialized = hin::materialize_meta_path_graph(graph, path);
    if (materialized.empty()) {
      bank.excluded.push_back(path);
    } else {
      valid.push_back(std::move(materialized));
    }
  }
  if (valid.empty()) return bank;

  std::vector<hin::ShiftOperator> ops;
  std::vector<double> scores;
  for (const auto& mg : valid) {
    ops.push_back(hin::laplacian(mg.adjacency, config.op_kind));
    try {
      scores.push_back(spectral::graph_s_high(ops.back(), x));
    } catch (const Error& e) {
      throw Error("node type '" + node_type.name + "': " + e.what());
    }
  }
  const auto split = spectral::select_representatives(scores);
  bank.degenerate = split.degenerate;

  std::vector<spectral::DivisionFilter> division_filters;
  for (std::size_t r = 0; r < split.representatives.size(); ++r) {
    const std::size_t k = split.representatives[r];
    RepresentativeInfo info;
    info.division = split.representative_divisions[r];
    info.entry = k;
    const Index n = ops[k].size();
    spectral::SpectralProfile profile;
    if (n > config.eigen_cap) {
      info.subsampled = true;
      const auto seed = sub_seed(config.seed, "profile/" + node_type.name + "/" + std::to_string(k));
      const auto sampled = spectral::sample_induced_subgraph(valid[k].adjacency, x, config.eigen_cap, seed);
      const auto op = hin::laplacian(sampled.adjacency, config.op_kind);
      profile = spectral::spectral_profile(op, sampled.features,
                                           static_cast<int>(std::min<Index>(config.bands, op.size())),
                                           config.eigen_cap);
    } else {
      profile = spectral::spectral_profile(ops[k], x, static_cast<int>(std::min<Index>(config.bands, n)),
                                           config.eigen_cap);
    }
    info.band_max = profile.band_max;
    info.argmax_band = profile.argmax_band;
    info.filter_index = spectral::assign_filter(profile.band_max, config.candidates);
    division_filters.push_back({info.division, info.filter_index});
    bank.representatives.push_back(info);
  }

  std::map<spectral::Division, spectral::FusedFilter> fused;
  for (std::size_t k = 0; k < valid.size(); ++k) {
    BankEntry entry;
    entry.path = valid[k].path;
    entry.op = std::make_shared<const SparseMatrix>(std::move(ops[k].matrix));
    entry.division = split.labels[k];
    entry.s_high = scores[k];
    if (config.filter_mode == FilterMode::kLowPass) {
      entry.poly = low_pass_filter();
    } else {
      auto it = fused.find(entry.division);
      if (it == fused.end()) {
        it = fused.emplace(entry.division,
                           spectral::fuse_filters(division_filters, entry.division, config.w_d, config.poly_d))
                 .first;
      }
      entry.poly = it->second.poly;
      entry.contributors = it->second.contributors;
      entry.fit_error_linf = it->second.fit_error_linf;
    }
    if (entry.poly.degree() > config.max_filter_degree) {
      throw Error("fused filter degree " + std::to_string(entry.poly.degree()) + " exceeds max_filter_degree " +
                  std::to_string(config.max_filter_degree));
    }
    bank.entries.push_back(std::move(entry));
  }
  return bank;
}

ad::Var multi_graph_forward(const MultiGraphFilterBank& bank, std::span<const ad::Var> meta_weights, ad::Var x) {
  if (bank.empty()) throw Error("multi_graph_forward: empty bank");
  if (meta_weights.size() != bank.entries.size()) {
    throw Error("multi_graph_forward: " + std::to_string(meta_weights.size()) + " meta weights for " +
                std::to_string(bank.entries.size()) + " meta-path graphs");
  }
  ad::Tape& tape = x.tape();
  ad::Var total;
  for (std::size_t k = 0; k < bank.entries.size(); ++k) {
    const auto& entry = bank.entries[k];
    const ad::Var coeffs = tape.constant(coefficient_column(entry.poly));
    const ad::Var y = ad::sparse_poly_apply(coeffs, *entry.op, x, meta_weights[k], bank.basis);
    total = (k == 0) ? y : ad::add(total, y);
  }
  return total;
}

std::vector<ad::Var> align_forward(std::span<const ad::Var> semantic, std::span<const ad::Var> weights) {
  if (semantic.size() != weights.size()) throw Error("align_forward: one weight matrix per node type required");
  std::vector<ad::Var> out;
  Index width = -1;
  for (std::size_t t = 0; t < semantic.size(); ++t) {
    if (semantic[t].cols() != weights[t].rows()) {
      throw Error("align_forward: width mismatch for type " + std::to_string(t) + " (" +
                  std::to_string(semantic[t].cols()) + " vs " + std::to_string(weights[t].rows()) + ")");
    }
    if (width >= 0 && weights[t].cols() != width) throw Error("align_forward: aligned widths differ across types");
    width = weights[t].cols();
    out.push_back(ad::matmul(semantic[t], weights[t]));
  }
  return out;
}

MetaGraphConvLayer build_meta_graph_layer(const hin::HeteroGraph& graph, const ModelConfig& config) {
  MetaGraphConvLayer layer;
  layer.graph = hin::degenerate_method1(graph);
  layer.op = std::make_shared<const SparseMatrix>(hin::laplacian(layer.graph.adjacency, config.op_kind).matrix);
  if (config.filter_mode == FilterMode::kLowPass) {
    layer.filters.push_back(low_pass_filter());
  } else {
    for (int i : config.meta_filters) layer.filters.push_back(spectral::make_chi_square_filter(i, config.poly_d).poly);
  }
  return layer;
}

ad::Var meta_graph_forward(const MetaGraphConvLayer& layer, ad::Var aligned, ad::Activation act) {
  if (layer.filters.empty()) throw Error("meta_graph_forward: empty filter set");
  if (aligned.rows() != layer.op->rows()) {
    throw Error("meta_graph_forward: dimension mismatch (operator " + std::to_string(layer.op->rows()) +
                ", rows " + std::to_string(aligned.rows()) + ")");
  }
  ad::Tape& tape = aligned.tape();
  const ad::Var activated = ad::activation(aligned, act);
  const ad::Var one = tape.constant(Matrix::Ones(1, 1));
  ad::Var total;
  for (std::size_t f = 0; f < layer.filters.size(); ++f) {
    const ad::Var coeffs = tape.constant(coefficient_column(layer.filters[f]));
    const ad::Var y = ad::sparse_poly_apply(coeffs, *layer.op, activated, one, ad::PolyBasis::kShiftedChebyshev);
    total = (f == 0) ? y : ad::add(total, y);
  }
  return total;
}

ChiGadModel ChiGadModel::build(const hin::HeteroGraph& graph, const ModelConfig& config) {
  config.validate();
  hin::validate(graph);
  ChiGadModel m;
  m.config_ = config;
  m.target_type_ = graph.target_type;
  m.graph_schema_ = hin::schema_hash(graph);

  for (int t = 0; t < graph.type_count(); ++t) {
    const auto& nt = graph.node_types[static_cast<std::size_t>(t)];
    if (nt.feature_dim() < 1) throw Error("node type '" + nt.name + "' has no feature columns");
    m.banks_.push_back(build_filter_bank(graph, t, config));
    m.features_.push_back(nt.features);
  }
  m.meta_layer_ = build_meta_graph_layer(graph, config);

  std::mt19937_64 rng(sub_seed(config.seed, "init"));
  for (int t = 0; t < graph.type_count(); ++t) {
    m.meta_weight_begin_.push_back(m.params_.size());
    const auto& bank = m.banks_[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < bank.entries.size(); ++k) {
      m.params_.add("meta_weight." + graph.node_types[static_cast<std::size_t>(t)].name + "." + std::to_string(k),
                    Matrix::Ones(1, 1));
    }
  }
  m.align_begin_ = m.params_.size();
  for (const auto& nt : graph.node_types) {
    m.params_.add("align." + nt.name, uniform_init(nt.feature_dim(), config.aligned_dim, nt.feature_dim(), rng));
  }
  m.mlp_begin_ = m.params_.size();
  add_mlp(m.params_, "mlp", config.aligned_dim, config.hidden_dim, config.mlp_layers, rng);

  Fnv1a h;
  h.add(static_cast<std::int64_t>(m.graph_schema_));
  h.add(to_string(config.filter_mode)).add(to_string(config.activation)).add(hin::to_string(config.op_kind));
  for (int i : config.meta_filters) h.add(std::int64_t{i});
  h.add(std::int64_t{config.poly_d});
  for (const auto& bank : m.banks_) {
    for (const auto& e : bank.entries) {
      h.add(e.path.describe(graph));
      h.add(std::int64_t{e.poly.degree()});
      for (const auto& c : e.contributors) h.add(std::int64_t{c.index});
    }
  }
  for (const auto& p : m.params_) {
    h.add(p.name).add(static_cast<std::int64_t>(p.value.rows())).add(static_cast<std::int64_t>(p.value.cols()));
  }
  m.fingerprint_ = h.value();
  return m;
}

ForwardOutput ChiGadModel::forward(ad::Tape& tape) const { return forward_features(tape, features_); }

ForwardOutput ChiGadModel::forward(ad::Tape& tape, const hin::HeteroGraph& graph) const {
  if (hin::schema_hash(graph) != graph_schema_) throw Error("schema mismatch: model was built for another graph schema");
  std::vector<Matrix> features;
  for (const auto& nt : graph.node_types) features.push_back(nt.features);
  return forward_features(tape, features);
}

ForwardOutput ChiGadModel::forward_features(ad::Tape& tape, const std::vector<Matrix>& features) const {
  ForwardOutput out;
  out.params = params_.bind(tape);
  const std::span<const ad::Var> params(out.params);

  std::vector<ad::Var> semantic;
  for (std::size_t t = 0; t < banks_.size(); ++t) {
    const ad::Var x = tape.constant(features[t]);
    const auto& bank = banks_[t];
    semantic.push_back(bank.empty() ? x
                                    : multi_graph_forward(bank, params.subspan(meta_weight_begin_[t], bank.entries.size()), x));
  }
  const auto aligned = align_forward(semantic, params.subspan(align_begin_, banks_.size()));
  const ad::Var stacked = ad::vstack(aligned);
  const ad::Var rep_all = meta_graph_forward(meta_layer_, stacked, config_.activation);

  const auto target = static_cast<std::size_t>(target_type_);
  out.representation = ad::slice_rows(rep_all, meta_layer_.graph.type_offsets[target], features[target].rows());
  out.logits = mlp_forward(params.subspan(mlp_begin_), out.representation, config_.activation);
  return out;
}

}  // namespace chigad::model
