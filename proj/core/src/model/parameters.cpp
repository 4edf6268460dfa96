// SPDX-License-Identifier: Apache-2.0

#include "chigad/model/parameters.hpp"

#include <cmath>

#include "chigad/hash.hpp"

namespace chigad::model {

Parameter& ParameterSet::add(std::string name, Matrix value) {
  if (find(name) != nullptr) throw Error("duplicate parameter name '" + name + "'");
  params_.push_back(Parameter{std::move(name), std::move(value)});
  return params_.back();
}

const Parameter* ParameterSet::find(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Index ParameterSet::scalar_count() const {
  Index total = 0;
  for (const auto& p : params_) total += p.value.size();
  return total;
}

Vector ParameterSet::flatten() const {
  Vector flat(scalar_count());
  Index at = 0;
  for (const auto& p : params_) {
    flat.segment(at, p.value.size()) = p.value.reshaped();
    at += p.value.size();
  }
  return flat;
}

void ParameterSet::assign(const Vector& flat) {
  if (flat.size() != scalar_count()) {
    throw Error("parameter count mismatch: expected " + std::to_string(scalar_count()) + ", got " +
                std::to_string(flat.size()));
  }
  Index at = 0;
  for (auto& p : params_) {
    p.value.reshaped() = flat.segment(at, p.value.size());
    at += p.value.size();
  }
}

std::vector<ad::Var> ParameterSet::bind(ad::Tape& tape) const {
  std::vector<ad::Var> vars;
  vars.reserve(params_.size());
  for (const auto& p : params_) vars.push_back(tape.leaf(p.value, true));
  return vars;
}

Matrix uniform_init(Index rows, Index cols, Index fan_in, std::mt19937_64& rng) {
  if (fan_in <= 0) throw Error("uniform_init: fan_in must be positive");
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) m(r, c) = dist(rng);
  }
  return m;
}

std::uint64_t sub_seed(std::uint64_t root, std::string_view stream) {
  return Fnv1a().add(static_cast<std::int64_t>(root)).add(stream).value();
}

}  // namespace chigad::model
