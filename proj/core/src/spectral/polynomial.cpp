// SPDX-License-Identifier: Apache-2.0

#include "chigad/spectral/polynomial.hpp"

#include <algorithm>

namespace chigad::spectral {
namespace {

// Column k holds the monomial (in w) coefficients of T_k(w - 1).
Matrix chebyshev_to_monomial(int degree) {
  const int n = degree + 1;
  // Coefficients of T_k(t) in powers of t.
  Matrix t_basis = Matrix::Zero(n, n);
  t_basis(0, 0) = 1.0;
  if (n > 1) t_basis(1, 1) = 1.0;
  for (int k = 2; k < n; ++k) {
    for (int p = 0; p < n; ++p) {
      double v = -t_basis(p, k - 2);
      if (p > 0) v += 2.0 * t_basis(p - 1, k - 1);
      t_basis(p, k) = v;
    }
  }
  // t^p = (w - 1)^p = sum_q C(p, q) w^q (-1)^{p - q}
  Matrix shift = Matrix::Zero(n, n);  // shift(q, p)
  for (int p = 0; p < n; ++p) {
    double binom = 1.0;
    for (int q = 0; q <= p; ++q) {
      if (q > 0) binom = binom * (p - q + 1) / q;
      shift(q, p) = binom * (((p - q) % 2 == 0) ? 1.0 : -1.0);
    }
  }
  return shift * t_basis;
}

}  // namespace

ChebyshevSeries::ChebyshevSeries(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) coefficients_.push_back(0.0);
}

ChebyshevSeries ChebyshevSeries::from_monomial(std::span<const double> monomial) {
  if (monomial.empty()) return ChebyshevSeries();
  const int degree = static_cast<int>(monomial.size()) - 1;
  const Matrix m = chebyshev_to_monomial(degree);
  Vector rhs(degree + 1);
  for (int k = 0; k <= degree; ++k) rhs(k) = monomial[static_cast<std::size_t>(k)];
  // m is upper triangular with leading entries 2^{k-1}.
  const Vector c = m.triangularView<Eigen::Upper>().solve(rhs);
  return ChebyshevSeries(std::vector<double>(c.data(), c.data() + c.size()));
}

std::vector<double> ChebyshevSeries::monomial() const {
  const Matrix m = chebyshev_to_monomial(degree());
  const Vector c = Eigen::Map<const Vector>(coefficients_.data(), static_cast<Index>(coefficients_.size()));
  const Vector a = m * c;
  return std::vector<double>(a.data(), a.data() + a.size());
}

double ChebyshevSeries::operator()(double w) const {
  const double t = w - 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (int k = degree(); k >= 1; --k) {
    const double b0 = coefficients_[static_cast<std::size_t>(k)] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coefficients_[0] + t * b1 - b2;
}

ChebyshevSeries& ChebyshevSeries::operator+=(const ChebyshevSeries& other) {
  if (other.coefficients_.size() > coefficients_.size()) {
    coefficients_.resize(other.coefficients_.size(), 0.0);
  }
  for (std::size_t k = 0; k < other.coefficients_.size(); ++k) coefficients_[k] += other.coefficients_[k];
  return *this;
}

Matrix apply_filter(const ChebyshevSeries& poly, const hin::ShiftOperator& op, const Matrix& x) {
  return apply_filter(poly, op.matrix, x);
}

Matrix apply_filter(const ChebyshevSeries& poly, const SparseMatrix& s, const Matrix& x) {
  if (s.rows() != s.cols()) throw Error("dimension mismatch: shift operator is not square");
  if (x.rows() != s.rows()) throw Error("dimension mismatch: signal rows do not match operator size");
  const auto& c = poly.coefficients();
  Matrix y = c[0] * x;
  if (poly.degree() == 0) return y;
  Matrix prev = x;
  Matrix curr = s * x - x;
  y += c[1] * curr;
  for (int k = 2; k <= poly.degree(); ++k) {
    Matrix next = 2.0 * (s * curr - curr) - prev;
    y += c[static_cast<std::size_t>(k)] * next;
    prev = std::move(curr);
    curr = std::move(next);
  }
  return y;
}

}  // namespace chigad::spectral
