// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "chigad/hin/homogenize.hpp"
#include "chigad/hin/meta_path.hpp"
#include "chigad/model/model.hpp"
#include "chigad/spectral/fusion.hpp"

namespace chigad::model {

/// chi: fused Chi-Square filters. lowpass: every filter replaced by the
/// degree-1 response 1 - w/2 (ablation baseline).
enum class FilterMode { kChiSquare, kLowPass };

std::string_view to_string(FilterMode mode);
FilterMode parse_filter_mode(std::string_view text);

struct ModelConfig {
  /// Filter indices available to the per-division assignment.
  std::vector<int> candidates{1, 2, 4, 8, 16, 32, 64, 128};
  /// Filter set of the meta-graph convolution.
  std::vector<int> meta_filters{1, 3, 5, 7, 9, 11, 13, 15};
  int bands = 10;
  double w_d = 0.1;
  int poly_d = 3;
  Index aligned_dim = 512;
  Index hidden_dim = 512;
  int mlp_layers = 4;
  int path_min = 2;
  int path_max = 4;
  ad::Activation activation = ad::Activation::kRelu;
  hin::OperatorKind op_kind = hin::OperatorKind::kNormalizedLaplacian;
  Index eigen_cap = spectral::kDefaultEigenCap;
  int max_filter_degree = 160;
  FilterMode filter_mode = FilterMode::kChiSquare;
  std::uint64_t seed = 0;

  /// Throws Error naming the first invalid field.
  void validate() const;
};

/// One meta-path graph with its operator and fused filter.
struct BankEntry {
  hin::MetaPath path;
  /// Shared so the operator outlives any tape that references it.
  std::shared_ptr<const SparseMatrix> op;
  spectral::ChebyshevSeries poly;
  spectral::Division division = spectral::Division::kMid;
  double s_high = 0.0;
  std::vector<spectral::DivisionFilter> contributors;
  double fit_error_linf = 0.0;
};

struct RepresentativeInfo {
  spectral::Division division = spectral::Division::kMid;
  std::size_t entry = 0;  // index into MultiGraphFilterBank::entries
  double band_max = 0.0;
  int argmax_band = 0;
  int filter_index = 1;
  bool subsampled = false;
};

/// Meta-path graphs of one node type with their filters.
struct MultiGraphFilterBank {
  int type = 0;
  std::vector<BankEntry> entries;
  /// Enumerated paths whose graph has no edge.
  std::vector<hin::MetaPath> excluded;
  std::vector<RepresentativeInfo> representatives;
  bool degenerate = false;
  ad::PolyBasis basis = ad::PolyBasis::kShiftedChebyshev;

  bool empty() const { return entries.empty(); }
};

/// Enumerates, materializes, ranks and assigns filters for one type.
/// The bank is empty when no meta-path graph has an edge.
MultiGraphFilterBank build_filter_bank(const hin::HeteroGraph& graph, int type, const ModelConfig& config);

/// sum_k p_k(w_k S_k) X. Throws on an empty bank or a weight count mismatch.
ad::Var multi_graph_forward(const MultiGraphFilterBank& bank, std::span<const ad::Var> meta_weights, ad::Var x);

/// X^s W per type. Throws on a width mismatch.
std::vector<ad::Var> align_forward(std::span<const ad::Var> semantic, std::span<const ad::Var> weights);

struct MetaGraphConvLayer {
  hin::HomoGraph graph;
  std::shared_ptr<const SparseMatrix> op;
  std::vector<spectral::ChebyshevSeries> filters;
};

MetaGraphConvLayer build_meta_graph_layer(const hin::HeteroGraph& graph, const ModelConfig& config);

/// sum_f f(S) act(aligned). Rows of `aligned` follow the Method-1 order.
ad::Var meta_graph_forward(const MetaGraphConvLayer& layer, ad::Var aligned, ad::Activation act);

/// ChiGAD network built for one HIN schema.
///
/// Parameter order: meta weights (type order, then bank order), alignment
/// matrices (type order), MLP head.
class ChiGadModel final : public Model {
 public:
  static ChiGadModel build(const hin::HeteroGraph& graph, const ModelConfig& config);

  ParameterSet& parameters() override { return params_; }
  const ParameterSet& parameters() const override { return params_; }
  /// Forward on the features captured at build time.
  ForwardOutput forward(ad::Tape& tape) const override;
  /// Forward on another graph with the same schema; throws "schema mismatch" otherwise.
  ForwardOutput forward(ad::Tape& tape, const hin::HeteroGraph& graph) const;
  std::uint64_t fingerprint() const override { return fingerprint_; }

  const ModelConfig& config() const { return config_; }
  const std::vector<MultiGraphFilterBank>& banks() const { return banks_; }
  const MetaGraphConvLayer& meta_layer() const { return meta_layer_; }
  int target_type() const { return target_type_; }

 private:
  ForwardOutput forward_features(ad::Tape& tape, const std::vector<Matrix>& features) const;

  ModelConfig config_;
  std::vector<MultiGraphFilterBank> banks_;
  MetaGraphConvLayer meta_layer_;
  std::vector<Matrix> features_;
  int target_type_ = 0;
  std::uint64_t graph_schema_ = 0;
  std::uint64_t fingerprint_ = 0;
  ParameterSet params_;
  // parameter index ranges
  std::vector<std::size_t> meta_weight_begin_;
  std::size_t align_begin_ = 0;
  std::size_t mlp_begin_ = 0;
};

/// The degree-1 low-pass response 1 - w/2.
spectral::ChebyshevSeries low_pass_filter();

}  // namespace chigad::model
