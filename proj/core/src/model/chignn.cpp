// SPDX-License-Identifier: Apache-2.0

#include "chigad/model/chignn.hpp"

#include "chigad/hash.hpp"

namespace chigad::model {

ChiGnnModel ChiGnnModel::build(const SparseMatrix& adjacency, Matrix features, const ChiGnnConfig& config) {
  if (config.filters.empty()) throw Error("ChiGNN: empty filter set");
  if (features.rows() != adjacency.rows()) throw Error("ChiGNN: feature rows do not match node count");
  if (features.cols() < 1) throw Error("ChiGNN: features have no columns");
  if (config.hidden_dim < 1 || config.mlp_layers < 1) throw Error("ChiGNN: hidden and mlp_layers must be >= 1");

  ChiGnnModel m;
  m.config_ = config;
  m.op_ = std::make_shared<const SparseMatrix>(hin::laplacian(adjacency, config.op_kind).matrix);
  if (config.filter_mode == FilterMode::kLowPass) {
    m.filters_.push_back(low_pass_filter());
  } else {
    for (int i : config.filters) m.filters_.push_back(spectral::make_chi_square_filter(i, config.poly_d).poly);
  }
  m.features_ = std::move(features);

  std::mt19937_64 rng(sub_seed(config.seed, "init"));
  m.params_.add("input", uniform_init(m.features_.cols(), config.hidden_dim, m.features_.cols(), rng));
  add_mlp(m.params_, "mlp", config.hidden_dim, config.hidden_dim, config.mlp_layers, rng);

  Fnv1a h;
  h.add("chignn").add(static_cast<std::int64_t>(adjacency.rows())).add(static_cast<std::int64_t>(adjacency.nonZeros()));
  h.add(to_string(config.filter_mode)).add(to_string(config.activation));
  for (int i : config.filters) h.add(std::int64_t{i});
  for (const auto& p : m.params_) {
    h.add(p.name).add(static_cast<std::int64_t>(p.value.rows())).add(static_cast<std::int64_t>(p.value.cols()));
  }
  m.fingerprint_ = h.value();
  return m;
}

ForwardOutput ChiGnnModel::forward(ad::Tape& tape) const { return forward(tape, features_); }

ForwardOutput ChiGnnModel::forward(ad::Tape& tape, const Matrix& features) const {
  if (features.rows() != op_->rows() || features.cols() != features_.cols()) {
    throw Error("ChiGNN: feature shape does not match the model");
  }
  ForwardOutput out;
  out.params = params_.bind(tape);
  const std::span<const ad::Var> params(out.params);
  const ad::Var x = tape.constant(features);
  const ad::Var h = ad::activation(ad::matmul(x, params[0]), config_.activation);
  const ad::Var one = tape.constant(Matrix::Ones(1, 1));
  ad::Var total;
  for (std::size_t f = 0; f < filters_.size(); ++f) {
    const auto& c = filters_[f].coefficients();
    Matrix col(static_cast<Index>(c.size()), 1);
    for (std::size_t k = 0; k < c.size(); ++k) col(static_cast<Index>(k), 0) = c[k];
    const ad::Var y = ad::sparse_poly_apply(tape.constant(std::move(col)), *op_, h, one,
                                            ad::PolyBasis::kShiftedChebyshev);
    total = (f == 0) ? y : ad::add(total, y);
  }
  out.representation = total;
  out.logits = mlp_forward(params.subspan(1), total, config_.activation);
  return out;
}

}  // namespace chigad::model
