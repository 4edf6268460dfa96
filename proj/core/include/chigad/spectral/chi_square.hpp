// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "chigad/spectral/polynomial.hpp"

namespace chigad::spectral {

/// Chi-Square response with n = 2i degrees of freedom and scale 1/(i+1),
/// before truncation: (1/(2^i Gamma(i))) (w(i+1))^{i-1} exp(-w(i+1)/2), w >= 0.
double chi_unnormalized(int i, double w);

/// S_i: integral of chi_unnormalized over [0, 2] (adaptive Gauss-Kronrod).
double normalization_constant(int i);

/// f_i(w) = chi_unnormalized(i, w) / S_i. Throws outside [0, 2].
double chi_response(int i, double w);

/// argmax of f_i on [0, 2]: 2(i-1)/(i+1).
double chi_mode(int i);

struct ChiMoments {
  double expectation = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the truncated density f_i on [0, 2].
ChiMoments chi_moments(int i);

/// Quadrature of the admissibility integral over [0, inf) of f_i(w)^2 / w,
/// where f_i keeps the S_i normaliser but is not truncated. Throws for i = 1
/// (f_1(0) != 0 makes the integral diverge).
double admissibility_integral(int i);

/// Closed form (1/(S_i 2^i Gamma(i)))^2 Gamma(2(i-1)). Throws for i = 1.
double admissibility_closed_form(int i);

struct PolynomialFit {
  ChebyshevSeries series;
  /// max |p(w_j) - f(w_j)| over the fitting grid
  double linf_error = 0.0;
};

/// Least-squares fit of `response` on a uniform grid of `grid_size` points
/// over [0, 2] in the shifted Chebyshev basis of the given degree.
PolynomialFit fit_response(const std::function<double(double)>& response, int degree,
                           int grid_size);

/// Fit of f_i with total degree i - 1 + d. Requires grid_size >= 4(i + d).
PolynomialFit fit_polynomial(int i, int d, int grid_size);

inline constexpr int kDefaultFitGrid = 1024;

struct ChiSquareFilter {
  int index = 1;
  double s = 0.0;
  int fit_degree_d = 3;
  ChebyshevSeries poly;
  double fit_error_linf = 0.0;

  int degree() const { return poly.degree(); }
  double response(double w) const { return chi_response(index, w); }
};

/// Builds filter i with its fitted polynomial. grid_size 0 picks
/// max(kDefaultFitGrid, 4(i + d)).
ChiSquareFilter make_chi_square_filter(int i, int d = 3, int grid_size = 0);

}  // namespace chigad::spectral
