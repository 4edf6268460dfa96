// SPDX-License-Identifier: Apache-2.0

#include "chigad/model/model.hpp"

namespace chigad::model {

Matrix Model::probabilities() const {
  ad::Tape tape;
  const ForwardOutput out = forward(tape);
  return ad::softmax_rows(out.logits.value());
}

void add_mlp(ParameterSet& params, const std::string& prefix, Index in, Index hidden, int layers,
             std::mt19937_64& rng) {
  if (layers < 1) throw Error("MLP needs at least one layer");
  if (in < 1 || hidden < 1) throw Error("MLP widths must be positive");
  Index width = in;
  for (int k = 0; k < layers; ++k) {
    const Index out = (k == layers - 1) ? 2 : hidden;
    const std::string base = prefix + "." + std::to_string(k);
    params.add(base + ".weight", uniform_init(width, out, width, rng));
    params.add(base + ".bias", uniform_init(1, out, width, rng));
    width = out;
  }
}

ad::Var mlp_forward(std::span<const ad::Var> layers, ad::Var x, ad::Activation act) {
  if (layers.empty() || layers.size() % 2 != 0) throw Error("mlp_forward: expected (weight, bias) pairs");
  ad::Var h = x;
  for (std::size_t k = 0; k < layers.size(); k += 2) {
    h = ad::add_row(ad::matmul(h, layers[k]), layers[k + 1]);
    if (k + 2 < layers.size()) h = ad::activation(h, act);
  }
  return h;
}

ad::Activation parse_activation(std::string_view text) {
  if (text == "relu") return ad::Activation::kRelu;
  if (text == "tanh") return ad::Activation::kTanh;
  if (text == "leaky_relu") return ad::Activation::kLeakyRelu;
  if (text == "identity") return ad::Activation::kIdentity;
  throw Error("unknown activation '" + std::string(text) + "'");
}

std::string_view to_string(ad::Activation act) {
  switch (act) {
    case ad::Activation::kRelu: return "relu";
    case ad::Activation::kTanh: return "tanh";
    case ad::Activation::kLeakyRelu: return "leaky_relu";
    case ad::Activation::kIdentity: return "identity";
  }
  return "relu";
}

}  // namespace chigad::model
