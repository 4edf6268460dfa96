// SPDX-License-Identifier: Apache-2.0

#include "chigad/ad/tape.hpp"

#include <algorithm>

namespace chigad::ad {

Var Tape::leaf(Matrix value, bool requires_grad) {
  Node node;
  node.value = std::move(value);
  node.op = requires_grad ? "parameter" : "constant";
  node.requires_grad = requires_grad;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Matrix value, std::string_view op, std::initializer_list<Var> parents, BackwardFn backward) {
  return record(std::move(value), op, std::span<const Var>(parents.begin(), parents.size()), std::move(backward));
}

Var Tape::record(Matrix value, std::string_view op, std::span<const Var> parents, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.op = op;
  for (const Var& p : parents) {
    if (&p.tape() != this) throw Error("op '" + std::string(op) + "' mixes nodes from different tapes");
    node.parents.push_back(p.id());
    node.requires_grad = node.requires_grad || nodes_[p.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Matrix& Tape::grad(std::size_t id) const {
  const Node& node = nodes_.at(id);
  if (node.grad.size() == 0 && node.value.size() != 0) {
    zero_ = Matrix::Zero(node.value.rows(), node.value.cols());
    return zero_;
  }
  return node.grad;
}

void Tape::accumulate(Var target, const Matrix& delta) {
  Node& node = nodes_.at(target.id());
  if (!node.requires_grad) return;
  if (delta.rows() != node.value.rows() || delta.cols() != node.value.cols()) {
    throw Error("gradient shape mismatch at node '" + std::string(node.op) + "'");
  }
  if (node.grad.size() == 0) {
    node.grad = delta;
  } else {
    node.grad += delta;
  }
}

void Tape::backward(Var loss) {
  if (backward_done_) throw Error("backward called twice without reset");
  const std::size_t root = loss.id();
  if (nodes_.at(root).value.rows() != 1 || nodes_.at(root).value.cols() != 1) {
    throw Error("backward needs a scalar (1x1) root");
  }
  backward_done_ = true;
  if (!nodes_[root].requires_grad) return;
  nodes_[root].grad = Matrix::Ones(1, 1);
  for (std::size_t id = root + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.backward || node.grad.size() == 0) continue;
    // Parents always have smaller ids, so `node` is not touched while its closure runs.
    node.backward(*this, node.grad);
  }
}

void Tape::reset() {
  nodes_.clear();
  backward_done_ = false;
}

}  // namespace chigad::ad
