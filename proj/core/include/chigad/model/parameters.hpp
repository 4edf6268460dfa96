// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chigad/ad/tape.hpp"
#include "chigad/types.hpp"

namespace chigad::model {

struct Parameter {
  std::string name;
  Matrix value;
};

/// Learnable tensors in declaration order. Checkpoints and optimizers rely
/// on that order staying fixed for a given model shape.
class ParameterSet {
 public:
  Parameter& add(std::string name, Matrix value);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return params_.at(i); }
  const Parameter& operator[](std::size_t i) const { return params_.at(i); }
  const Parameter* find(std::string_view name) const;

  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  /// Total number of scalars.
  Index scalar_count() const;
  /// Concatenation of column-major parameter values.
  Vector flatten() const;
  /// Inverse of flatten(). Throws on a length mismatch.
  void assign(const Vector& flat);

  /// Records every parameter as a gradient-requiring leaf, in order.
  std::vector<ad::Var> bind(ad::Tape& tape) const;

 private:
  std::vector<Parameter> params_;
};

/// rows x cols, entries uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
Matrix uniform_init(Index rows, Index cols, Index fan_in, std::mt19937_64& rng);

/// Deterministic sub-seed derived from a root seed and a stream name.
std::uint64_t sub_seed(std::uint64_t root, std::string_view stream);

}  // namespace chigad::model
