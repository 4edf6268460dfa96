// SPDX-License-Identifier: Apache-2.0

#include "chigad/spectral/alignment.hpp"

#include <cmath>
#include <random>

#include "chigad/spectral/profile.hpp"

namespace chigad::spectral {
namespace {

struct Quadratics {
  Matrix gram;  // X^T X
  Matrix form;  // X^T L X
};

double rayleigh(const Quadratics& q, const Vector& w) {
  const double den = w.dot(q.gram * w);
  return den > 0.0 ? w.dot(q.form * w) / den : -1.0;
}

// Best direction in span{w, e_j}: largest root of det(M2 - lambda G2) = 0.
bool refine_coordinate(const Quadratics& q, Vector& w, Index j) {
  const Vector gw = q.gram * w;
  const Vector mw = q.form * w;
  const double g11 = w.dot(gw), g12 = gw(j), g22 = q.gram(j, j);
  const double m11 = w.dot(mw), m12 = mw(j), m22 = q.form(j, j);
  const double a = g11 * g22 - g12 * g12;
  if (a <= 1e-12 * g11 * g22) return false;  // e_j already in the span of w
  const double b = -(m11 * g22 + m22 * g11 - 2.0 * m12 * g12);
  const double c = m11 * m22 - m12 * m12;
  const double disc = std::max(0.0, b * b - 4.0 * a * c);
  const double lambda = (-b + std::sqrt(disc)) / (2.0 * a);
  double alpha = m12 - lambda * g12;
  double beta = -(m11 - lambda * g11);
  if (std::abs(alpha) + std::abs(beta) < 1e-300) {
    alpha = m22 - lambda * g22;
    beta = -(m12 - lambda * g12);
  }
  Vector candidate = alpha * w;
  candidate(j) += beta;
  const double norm = std::sqrt(std::max(candidate.dot(q.gram * candidate), 0.0));
  if (!(norm > 0.0)) return false;
  candidate /= norm;
  const double before = rayleigh(q, w);
  const double after = rayleigh(q, candidate);
  if (after > before + 1e-14 * std::max(1.0, std::abs(before))) {
    w = candidate;
    return true;
  }
  return false;
}

void refine(const Quadratics& q, Vector& w) {
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool improved = false;
    for (Index j = 0; j < w.size(); ++j) improved = refine_coordinate(q, w, j) || improved;
    if (!improved) break;
  }
}

}  // namespace

AlignmentSearchResult theorem1_search(const Matrix& signals, const hin::ShiftOperator& op, int trials,
                                      std::uint64_t seed) {
  const Index k = signals.cols();
  if (k < 1) throw Error("theorem1_search: need at least one signal");
  if (signals.rows() != op.size()) throw Error("theorem1_search: signal rows do not match operator");

  AlignmentSearchResult best;
  best.s_high = -1.0;
  for (Index j = 0; j < k; ++j) {
    const double value = s_high(signals.col(j), op);
    if (value > best.s_high) {
      best.s_high = value;
      best.weights = Vector::Unit(k, j);
    }
  }

  const Quadratics q{signals.transpose() * signals, signals.transpose() * (op.matrix * signals)};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto consider = [&](Vector w) {
    refine(q, w);
    const Vector combined = signals * w;
    if (combined.squaredNorm() == 0.0) return;
    const double value = s_high(combined, op);
    if (value > best.s_high + 1e-14 * std::max(1.0, std::abs(best.s_high))) {
      best.s_high = value;
      best.weights = w;
    }
  };
  consider(best.weights);
  for (int t = 0; t < trials; ++t) {
    Vector w(k);
    for (Index j = 0; j < k; ++j) w(j) = normal(rng);
    consider(std::move(w));
  }
  return best;
}

}  // namespace chigad::spectral
