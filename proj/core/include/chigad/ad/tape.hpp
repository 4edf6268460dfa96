// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "chigad/types.hpp"

namespace chigad::ad {

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape
/// is alive and not reset.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  const Matrix& value() const;
  const Matrix& grad() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Called during the reverse sweep with the node's accumulated gradient.
using BackwardFn = std::function<void(Tape&, const Matrix& upstream)>;

/// Append-only record of the forward computation.
///
/// backward() visits nodes in exact reverse creation order and accumulates
/// gradients additively, so fan-out needs no special handling. A tape is
/// single-writer; separate evaluations need separate tapes.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Matrix value, bool requires_grad = true);
  Var constant(Matrix value) { return leaf(std::move(value), false); }

  /// Records an op. The backward function only runs when some parent needs
  /// a gradient and this node received one.
  Var record(Matrix value, std::string_view op, std::initializer_list<Var> parents, BackwardFn backward);
  Var record(Matrix value, std::string_view op, std::span<const Var> parents, BackwardFn backward);

  const Matrix& value(std::size_t id) const { return nodes_.at(id).value; }
  /// Zero matrix of the right shape when no gradient reached the node.
  const Matrix& grad(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }
  std::string_view op(std::size_t id) const { return nodes_.at(id).op; }
  const std::vector<std::size_t>& parents(std::size_t id) const { return nodes_.at(id).parents; }

  /// Adds `delta` into the gradient of `target` (no-op for constants).
  void accumulate(Var target, const Matrix& delta);

  /// Seeds d(loss)/d(loss) = 1 and runs the reverse sweep. Throws for a
  /// non-scalar root or a second call without reset().
  void backward(Var loss);

  void reset();
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;  // empty until a gradient arrives
    std::string_view op;
    std::vector<std::size_t> parents;
    BackwardFn backward;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
  mutable Matrix zero_;
  bool backward_done_ = false;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }
inline const Matrix& Var::grad() const { return tape_->grad(id_); }

enum class Activation { kRelu, kTanh, kLeakyRelu, kIdentity };

inline constexpr double kLeakySlope = 0.01;

Var matmul(Var a, Var b);
Var add(Var a, Var b);
/// a (n x d) + row (1 x d) broadcast over rows.
Var add_row(Var a, Var row);
/// a * s with s a 1x1 node.
Var scale(Var a, Var s);
Var scale(Var a, double s);
Var elementwise_mul(Var a, Var b);
/// 1x1 sum of all entries.
Var sum(Var a);
/// ReLU subgradient at 0 is 0; leaky slope is kLeakySlope.
Var activation(Var x, Activation kind);
/// Rows stacked in argument order; all inputs share a column count.
Var vstack(std::span<const Var> parts);
Var slice_rows(Var a, Index begin, Index count);

enum class PolyBasis {
  kMonomial,          // p(M) = sum_k c_k M^k
  kShiftedChebyshev,  // p(M) = sum_k c_k T_k(M - I)
};

/// y = p(w S) x with coefficients c ((D+1) x 1) in the given basis.
/// Gradients flow to x, the 1x1 meta weight w and the coefficients.
/// S is a constant and must outlive the tape.
Var sparse_poly_apply(Var coeffs, const SparseMatrix& s, Var x, Var meta_weight,
                      PolyBasis basis = PolyBasis::kMonomial);

/// -(1/N) sum_{i in mask} w_i [y_i log p_i + (1 - y_i) log(1 - p_i)],
/// p_i = softmax(logits_i)[1], N = |mask|. Gradients go to the logits only.
Var weighted_softmax_ce(Var logits, std::span<const int> labels, std::span<const double> weights,
                        const std::vector<bool>& mask);

/// Row-wise softmax, max-subtracted.
Matrix softmax_rows(const Matrix& logits);

}  // namespace chigad::ad
