// SPDX-License-Identifier: Apache-2.0

#include "chigad/spectral/chi_square.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace chigad::spectral {
namespace {

void require_index(int i) {
  if (i < 1) throw Error("Chi-Square filter index must be >= 1, got " + std::to_string(i));
}

// log of 1/(2^i Gamma(i))
double log_prefactor(int i) { return -i * std::log(2.0) - std::lgamma(static_cast<double>(i)); }

double integrate_0_2(const std::function<double(double)>& f) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0, 15, 1e-14, &error);
}

}  // namespace

double chi_unnormalized(int i, double w) {
  require_index(i);
  if (w < 0.0) return 0.0;
  const double scaled = w * (i + 1);
  if (i == 1) return std::exp(log_prefactor(1) - 0.5 * scaled);
  if (w == 0.0) return 0.0;
  return std::exp(log_prefactor(i) + (i - 1) * std::log(scaled) - 0.5 * scaled);
}

double normalization_constant(int i) {
  require_index(i);
  static std::mutex mutex;
  static std::map<int, double> memo;
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(i); it != memo.end()) return it->second;
  }
  const double s = integrate_0_2([i](double w) { return chi_unnormalized(i, w); });
  std::lock_guard lock(mutex);
  memo.emplace(i, s);
  return s;
}

double chi_response(int i, double w) {
  if (!(w >= 0.0 && w <= 2.0)) throw Error("chi_response: w must lie in [0, 2]");
  return chi_unnormalized(i, w) / normalization_constant(i);
}

double chi_mode(int i) {
  require_index(i);
  const double mode = 2.0 * (i - 1) / (i + 1);
  return std::clamp(mode, 0.0, 2.0);
}

ChiMoments chi_moments(int i) {
  const double s = normalization_constant(i);
  const double mean = integrate_0_2([i](double w) { return w * chi_unnormalized(i, w); }) / s;
  const double var =
      integrate_0_2([i, mean](double w) { return (w - mean) * (w - mean) * chi_unnormalized(i, w); }) / s;
  return {mean, var};
}

double admissibility_integral(int i) {
  require_index(i);
  if (i == 1) throw Error("not admissible: i = 1 diverges (Gamma(0) pole, f_1(0) != 0)");
  const double s = normalization_constant(i);
  auto integrand = [i, s](double w) {
    if (w <= 0.0) return 0.0;
    const double f = chi_unnormalized(i, w) / s;
    return f * f / w;
  };
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  // Mass sits below the mode bound 2, so a finite head plus an exp-sinh tail converge fast.
  double err = 0.0;
  const double head = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 4.0, 20, 1e-14, &err);
  exp_sinh<double> tail_rule;
  const double tail = tail_rule.integrate(
      [&](double w) { return integrand(w); }, 4.0, std::numeric_limits<double>::infinity(), 1e-14);
  return head + tail;
}

double admissibility_closed_form(int i) {
  require_index(i);
  if (i == 1) throw Error("not admissible: i = 1 diverges (Gamma(0) pole, f_1(0) != 0)");
  const double s = normalization_constant(i);
  const double log_value = 2.0 * (log_prefactor(i) - std::log(s)) + std::lgamma(2.0 * (i - 1));
  return std::exp(log_value);
}

PolynomialFit fit_response(const std::function<double(double)>& response, int degree, int grid_size) {
  if (degree < 0) throw Error("fit degree must be nonnegative");
  if (grid_size < degree + 2) throw Error("ill-conditioned fit: grid too small for degree");
  const Index cols = degree + 1;
  Matrix basis(grid_size, cols);
  Vector target(grid_size);
  const double h = 2.0 / (grid_size - 1);
  for (Index j = 0; j < grid_size; ++j) {
    const double w = (j == grid_size - 1) ? 2.0 : j * h;
    const double t = w - 1.0;
    target(j) = response(w);
    basis(j, 0) = 1.0;
    if (cols > 1) basis(j, 1) = t;
    for (Index k = 2; k < cols; ++k) basis(j, k) = 2.0 * t * basis(j, k - 1) - basis(j, k - 2);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(basis);
  if (qr.rank() < cols) throw Error("ill-conditioned fit: rank-deficient Chebyshev system");
  const Vector c = qr.solve(target);
  PolynomialFit fit;
  fit.series = ChebyshevSeries(std::vector<double>(c.data(), c.data() + c.size()));
  fit.linf_error = (basis * c - target).cwiseAbs().maxCoeff();
  return fit;
}

PolynomialFit fit_polynomial(int i, int d, int grid_size) {
  require_index(i);
  if (d < 1) throw Error("polynomial degree budget d must be >= 1");
  if (grid_size < 4 * (i + d)) {
    throw Error("ill-conditioned fit: grid_size must be >= 4(i + d) = " + std::to_string(4 * (i + d)));
  }
  const double s = normalization_constant(i);
  return fit_response([i, s](double w) { return chi_unnormalized(i, w) / s; }, i - 1 + d, grid_size);
}

ChiSquareFilter make_chi_square_filter(int i, int d, int grid_size) {
  if (grid_size == 0) grid_size = std::max(kDefaultFitGrid, 4 * (i + d));
  auto fit = fit_polynomial(i, d, grid_size);
  ChiSquareFilter f;
  f.index = i;
  f.s = normalization_constant(i);
  f.fit_degree_d = d;
  f.poly = std::move(fit.series);
  f.fit_error_linf = fit.linf_error;
  return f;
}

}  // namespace chigad::spectral
