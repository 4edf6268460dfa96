// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "chigad/ad/tape.hpp"
#include "chigad/model/parameters.hpp"

namespace chigad::model {

struct ForwardOutput {
  /// Target nodes x 2.
  ad::Var logits;
  /// Pre-head representation of the target nodes (X'_{o_t}).
  ad::Var representation;
  /// Leaves bound to parameters(), same order.
  std::vector<ad::Var> params;
};

/// Anything the trainer can fit: a parameter set plus a full-batch forward.
class Model {
 public:
  virtual ~Model() = default;

  virtual ParameterSet& parameters() = 0;
  virtual const ParameterSet& parameters() const = 0;
  virtual ForwardOutput forward(ad::Tape& tape) const = 0;
  /// Hash of everything a checkpoint must agree with.
  virtual std::uint64_t fingerprint() const = 0;

  /// Softmax probabilities of the target nodes on a fresh tape.
  Matrix probabilities() const;
};

/// Appends an MLP head "<prefix>.<k>.weight/bias": layers linear maps
/// in -> hidden -> ... -> hidden -> 2 (a single layer maps in -> 2).
void add_mlp(ParameterSet& params, const std::string& prefix, Index in, Index hidden, int layers,
             std::mt19937_64& rng);

/// Applies (weight, bias) pairs with `act` between layers, none after the last.
ad::Var mlp_forward(std::span<const ad::Var> layers, ad::Var x, ad::Activation act);

ad::Activation parse_activation(std::string_view text);
std::string_view to_string(ad::Activation act);

}  // namespace chigad::model
