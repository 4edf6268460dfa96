// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "chigad/ad/tape.hpp"

namespace chigad::ad {
namespace {

void check_same_tape(Var a, Var b, const char* op) {
  if (&a.tape() != &b.tape()) throw Error(std::string(op) + ": operands on different tapes");
}

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  throw Error(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
              std::to_string(b.cols()) + ")");
}

// Runs the basis recurrence t_0 = x, t_1, ... for M = w S and hands each term
// (and optionally its derivative in w) to `visit(k, t_k, dt_k)`.
template <typename Visit>
void poly_terms(const SparseMatrix& s, const Matrix& x, double w, Index degree, PolyBasis basis,
                bool with_derivative, Visit&& visit) {
  Matrix prev = x;
  Matrix dprev = with_derivative ? Matrix::Zero(x.rows(), x.cols()) : Matrix();
  visit(Index{0}, prev, dprev);
  if (degree == 0) return;

  Matrix sx = s * prev;
  Matrix cur;
  Matrix dcur;
  if (basis == PolyBasis::kMonomial) {
    cur = w * sx;
    if (with_derivative) dcur = sx;
  } else {
    cur = w * sx - prev;
    if (with_derivative) dcur = sx;
  }
  visit(Index{1}, cur, dcur);

  for (Index k = 2; k <= degree; ++k) {
    Matrix st = s * cur;
    Matrix next;
    Matrix dnext;
    if (basis == PolyBasis::kMonomial) {
      next = w * st;
      if (with_derivative) dnext = st + w * (s * dcur);
    } else {
      next = 2.0 * (w * st - cur) - prev;
      if (with_derivative) dnext = 2.0 * st + 2.0 * (w * (s * dcur) - dcur) - dprev;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (with_derivative) {
      dprev = std::move(dcur);
      dcur = std::move(dnext);
    }
    visit(k, cur, dcur);
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  check_same_tape(a, b, "matmul");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
  return a.tape().record(av * bv, "matmul", {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (t.requires_grad(a.id())) t.accumulate(a, g * t.value(b.id()).transpose());
    if (t.requires_grad(b.id())) t.accumulate(b, t.value(a.id()).transpose() * g);
  });
}

Var add(Var a, Var b) {
  check_same_tape(a, b, "add");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) shape_error("add", av, bv);
  return a.tape().record(av + bv, "add", {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var add_row(Var a, Var row) {
  check_same_tape(a, row, "add_row");
  const Matrix& av = a.value();
  const Matrix& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols()) shape_error("add_row", av, rv);
  Matrix out = av.rowwise() + rv.row(0);
  return a.tape().record(std::move(out), "add_row", {a, row}, [a, row](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    if (t.requires_grad(row.id())) t.accumulate(row, g.colwise().sum());
  });
}

Var scale(Var a, Var s) {
  check_same_tape(a, s, "scale");
  const Matrix& sv = s.value();
  if (sv.rows() != 1 || sv.cols() != 1) shape_error("scale", a.value(), sv);
  const double factor = sv(0, 0);
  return a.tape().record(a.value() * factor, "scale", {a, s}, [a, s](Tape& t, const Matrix& g) {
    const double f = t.value(s.id())(0, 0);
    if (t.requires_grad(a.id())) t.accumulate(a, g * f);
    if (t.requires_grad(s.id())) {
      Matrix ds(1, 1);
      ds(0, 0) = g.cwiseProduct(t.value(a.id())).sum();
      t.accumulate(s, ds);
    }
  });
}

Var scale(Var a, double s) {
  return a.tape().record(a.value() * s, "scale_const", {a},
                         [a, s](Tape& t, const Matrix& g) { t.accumulate(a, g * s); });
}

Var elementwise_mul(Var a, Var b) {
  check_same_tape(a, b, "elementwise_mul");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) shape_error("elementwise_mul", av, bv);
  return a.tape().record(av.cwiseProduct(bv), "elementwise_mul", {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (t.requires_grad(a.id())) t.accumulate(a, g.cwiseProduct(t.value(b.id())));
    if (t.requires_grad(b.id())) t.accumulate(b, g.cwiseProduct(t.value(a.id())));
  });
}

Var sum(Var a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape().record(std::move(out), "sum", {a}, [a](Tape& t, const Matrix& g) {
    const Matrix& v = t.value(a.id());
    t.accumulate(a, Matrix::Constant(v.rows(), v.cols(), g(0, 0)));
  });
}

Var activation(Var x, Activation kind) {
  const Matrix& v = x.value();
  Matrix out;
  switch (kind) {
    case Activation::kRelu: out = v.cwiseMax(0.0); break;
    case Activation::kTanh: out = v.array().tanh().matrix(); break;
    case Activation::kLeakyRelu: out = v.unaryExpr([](double z) { return z > 0.0 ? z : kLeakySlope * z; }); break;
    case Activation::kIdentity: out = v; break;
  }
  return x.tape().record(std::move(out), "activation", {x}, [x, kind](Tape& t, const Matrix& g) {
    const Matrix& in = t.value(x.id());
    Matrix d;
    switch (kind) {
      case Activation::kRelu: d = in.unaryExpr([](double z) { return z > 0.0 ? 1.0 : 0.0; }); break;
      case Activation::kTanh: d = (1.0 - in.array().tanh().square()).matrix(); break;
      case Activation::kLeakyRelu: d = in.unaryExpr([](double z) { return z > 0.0 ? 1.0 : kLeakySlope; }); break;
      case Activation::kIdentity: t.accumulate(x, g); return;
    }
    t.accumulate(x, g.cwiseProduct(d));
  });
}

Var vstack(std::span<const Var> parts) {
  if (parts.empty()) throw Error("vstack: no inputs");
  Tape& tape = parts.front().tape();
  const Index cols = parts.front().cols();
  Index rows = 0;
  for (const Var& p : parts) {
    if (&p.tape() != &tape) throw Error("vstack: operands on different tapes");
    if (p.cols() != cols) shape_error("vstack", parts.front().value(), p.value());
    rows += p.rows();
  }
  Matrix out(rows, cols);
  std::vector<Index> offsets;
  Index at = 0;
  for (const Var& p : parts) {
    offsets.push_back(at);
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return tape.record(std::move(out), "vstack", parts, [inputs, offsets](Tape& t, const Matrix& g) {
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const Index r = t.value(inputs[k].id()).rows();
      if (t.requires_grad(inputs[k].id())) t.accumulate(inputs[k], g.middleRows(offsets[k], r));
    }
  });
}

Var slice_rows(Var a, Index begin, Index count) {
  const Matrix& v = a.value();
  if (begin < 0 || count < 0 || begin + count > v.rows()) {
    throw Error("slice_rows: range [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                ") outside " + std::to_string(v.rows()) + " rows");
  }
  return a.tape().record(v.middleRows(begin, count), "slice_rows", {a}, [a, begin, count](Tape& t, const Matrix& g) {
    const Matrix& in = t.value(a.id());
    Matrix d = Matrix::Zero(in.rows(), in.cols());
    d.middleRows(begin, count) = g;
    t.accumulate(a, d);
  });
}

Var sparse_poly_apply(Var coeffs, const SparseMatrix& s, Var x, Var meta_weight, PolyBasis basis) {
  check_same_tape(coeffs, x, "sparse_poly_apply");
  check_same_tape(x, meta_weight, "sparse_poly_apply");
  const Matrix& c = coeffs.value();
  if (c.cols() != 1 || c.rows() < 1) throw Error("sparse_poly_apply: coefficients must be a (D+1) x 1 column");
  if (s.rows() != s.cols()) throw Error("sparse_poly_apply: operator is not square");
  if (x.rows() != s.rows()) {
    throw Error("sparse_poly_apply: dimension mismatch (operator " + std::to_string(s.rows()) + ", signal rows " +
                std::to_string(x.rows()) + ")");
  }
  if (meta_weight.rows() != 1 || meta_weight.cols() != 1) throw Error("sparse_poly_apply: meta weight must be 1x1");

  const double w = meta_weight.value()(0, 0);
  const Index degree = c.rows() - 1;
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  poly_terms(s, x.value(), w, degree, basis, false,
             [&](Index k, const Matrix& t, const Matrix&) { y.noalias() += c(k, 0) * t; });

  const SparseMatrix* op = &s;
  return x.tape().record(std::move(y), "sparse_poly_apply", {coeffs, x, meta_weight},
                         [coeffs, x, meta_weight, op, basis](Tape& t, const Matrix& g) {
    const Matrix& cv = t.value(coeffs.id());
    const Matrix& xv = t.value(x.id());
    const double wv = t.value(meta_weight.id())(0, 0);
    const Index deg = cv.rows() - 1;
    const bool need_c = t.requires_grad(coeffs.id());
    const bool need_w = t.requires_grad(meta_weight.id());

    if (need_c || need_w) {
      Matrix dc = Matrix::Zero(cv.rows(), 1);
      double dw = 0.0;
      poly_terms(*op, xv, wv, deg, basis, need_w, [&](Index k, const Matrix& term, const Matrix& dterm) {
        if (need_c) dc(k, 0) = g.cwiseProduct(term).sum();
        if (need_w) dw += cv(k, 0) * g.cwiseProduct(dterm).sum();
      });
      if (need_c) t.accumulate(coeffs, dc);
      if (need_w) t.accumulate(meta_weight, Matrix::Constant(1, 1, dw));
    }
    if (t.requires_grad(x.id())) {
      // dL/dx = p(w S)^T g = p(w S^T) g.
      const SparseMatrix st = op->transpose();
      Matrix dx = Matrix::Zero(g.rows(), g.cols());
      poly_terms(st, g, wv, deg, basis, false,
                 [&](Index k, const Matrix& term, const Matrix&) { dx.noalias() += cv(k, 0) * term; });
      t.accumulate(x, dx);
    }
  });
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    double total = 0.0;
    for (Index c = 0; c < logits.cols(); ++c) {
      out(r, c) = std::exp(logits(r, c) - m);
      total += out(r, c);
    }
    out.row(r) /= total;
  }
  return out;
}

Var weighted_softmax_ce(Var logits, std::span<const int> labels, std::span<const double> weights,
                        const std::vector<bool>& mask) {
  const Matrix& z = logits.value();
  const auto n = static_cast<std::size_t>(z.rows());
  if (z.cols() != 2) throw Error("weighted_softmax_ce: logits must have 2 columns");
  if (labels.size() != n || weights.size() != n || mask.size() != n) {
    throw Error("weighted_softmax_ce: labels/weights/mask length does not match logits rows");
  }
  std::size_t count = 0;
  for (bool m : mask) count += m ? 1 : 0;
  if (count == 0) throw Error("weighted_softmax_ce: empty mask");

  const double inv_n = 1.0 / static_cast<double>(count);
  double loss = 0.0;
  Matrix grad = Matrix::Zero(z.rows(), 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    const int y = labels[i];
    if (y != 0 && y != 1) throw Error("weighted_softmax_ce: masked label must be 0 or 1");
    const auto r = static_cast<Index>(i);
    // log-softmax with max subtraction
    const double m = std::max(z(r, 0), z(r, 1));
    const double lse = m + std::log(std::exp(z(r, 0) - m) + std::exp(z(r, 1) - m));
    const double log_p1 = z(r, 1) - lse;
    const double log_p0 = z(r, 0) - lse;
    loss -= weights[i] * (y == 1 ? log_p1 : log_p0);
    const double p1 = std::exp(log_p1);
    const double scale = weights[i] * inv_n;
    grad(r, 0) = scale * (static_cast<double>(y) - p1);
    grad(r, 1) = scale * (p1 - static_cast<double>(y));
  }
  Matrix out(1, 1);
  out(0, 0) = loss * inv_n;
  return logits.tape().record(std::move(out), "weighted_softmax_ce", {logits},
                              [logits, grad = std::move(grad)](Tape& t, const Matrix& g) {
                                t.accumulate(logits, grad * g(0, 0));
                              });
}

}  // namespace chigad::ad
