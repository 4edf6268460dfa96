// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "chigad/hin/laplacian.hpp"
#include "chigad/types.hpp"

namespace chigad::spectral {

/// Polynomial on the spectral domain [0, 2], stored in the shifted Chebyshev
/// basis p(w) = sum_k c_k T_k(w - 1).
///
/// The Chebyshev form stays well conditioned up to degree ~130 (the i = 128
/// filter), where monomial coefficients overflow any useful precision.
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  explicit ChebyshevSeries(std::vector<double> coefficients);

  /// p(w) = sum_k a_k w^k. Intended for low degrees.
  static ChebyshevSeries from_monomial(std::span<const double> monomial);

  /// Monomial coefficients a_k of p(w) = sum_k a_k w^k.
  std::vector<double> monomial() const;

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// Clenshaw evaluation.
  double operator()(double w) const;

  ChebyshevSeries& operator+=(const ChebyshevSeries& other);
  friend ChebyshevSeries operator+(ChebyshevSeries a, const ChebyshevSeries& b) { return a += b; }

 private:
  std::vector<double> coefficients_{0.0};
};

/// Y = p(S) X, evaluated with the three-term recurrence on (S - I).
/// Never forms a matrix power; a node more than degree() hops away from the
/// support of X stays exactly zero.
Matrix apply_filter(const ChebyshevSeries& poly, const hin::ShiftOperator& op, const Matrix& x);
Matrix apply_filter(const ChebyshevSeries& poly, const SparseMatrix& op, const Matrix& x);

}  // namespace chigad::spectral
