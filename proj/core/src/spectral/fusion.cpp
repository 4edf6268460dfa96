// SPDX-License-Identifier: Apache-2.0

#include "chigad/spectral/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace chigad::spectral {
namespace {

constexpr int kOversample = 4;

std::vector<double> sample_on_grid(int i, int grid_size) {
  const double s = normalization_constant(i);
  const double h = 2.0 / (grid_size - 1);
  std::vector<double> out(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    const double w = (j == grid_size - 1) ? 2.0 : j * h;
    out[static_cast<std::size_t>(j)] = chi_unnormalized(i, w) / s;
  }
  return out;
}

// Density of a * X with X ~ f_i, sampled from 0 with spacing h, unit mass.
std::vector<double> scaled_component(int i, double a, double h) {
  const double s = normalization_constant(i);
  const auto count = static_cast<std::size_t>(std::floor(2.0 * a / h + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = std::min(2.0, j * h / a);
    out[j] = chi_unnormalized(i, x) / (s * a);
  }
  const double mass = trapezoid(out, h);
  for (double& v : out) v /= mass;
  return out;
}

}  // namespace

double trapezoid(std::span<const double> samples, double h) {
  if (samples.size() < 2) return 0.0;
  double total = 0.5 * (samples.front() + samples.back());
  for (std::size_t j = 1; j + 1 < samples.size(); ++j) total += samples[j];
  return total * h;
}

std::vector<double> convolve_sampled(std::span<const double> a, std::span<const double> b, double h) {
  if (a.empty() || b.empty()) return {};
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::vector<double> out(na + nb - 1, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t lo = (k >= nb - 1) ? k - (nb - 1) : 0;
    const std::size_t hi = std::min(k, na - 1);
    if (lo > hi) continue;
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += a[j] * b[k - j];
    // Trapezoid end corrections over the overlap [lo, hi].
    if (hi > lo) sum -= 0.5 * (a[lo] * b[k - lo] + a[hi] * b[k - hi]);
    else sum = 0.0;
    out[k] = sum * h;
  }
  return out;
}

FusedFilter fuse_filters(std::span<const DivisionFilter> divisions, Division own, double w_d, int d,
                         int grid_size) {
  if (divisions.empty()) throw Error("fuse_filters: no division filters");
  if (!(w_d > 0.0)) throw Error("fuse_filters: w_d must be positive");
  if (grid_size < 8) throw Error("fuse_filters: grid too small");

  FusedFilter fused;
  const double h = 2.0 / (grid_size - 1);

  if (divisions.size() == 1) {
    const int i = divisions.front().index;
    const auto filter = make_chi_square_filter(i, d, std::max(grid_size, 4 * (i + d)));
    fused.grid_response = sample_on_grid(i, grid_size);
    fused.poly = filter.poly;
    fused.fit_error_linf = filter.fit_error_linf;
    fused.contributors.assign(divisions.begin(), divisions.end());
    fused.weights = {1.0};
    return fused;
  }

  const double fine_h = h / kOversample;
  std::vector<double> conv;
  double total_weight = 0.0;
  int max_index = 1;
  for (const auto& div : divisions) {
    const double a = (div.division == own) ? 1.0 : w_d;
    total_weight += a;
    max_index = std::max(max_index, div.index);
    fused.contributors.push_back(div);
    fused.weights.push_back(a);
    auto component = scaled_component(div.index, a, fine_h);
    conv = conv.empty() ? std::move(component) : convolve_sampled(conv, component, fine_h);
  }

  // Support is [0, 2 * total_weight]; pull it back onto [0, 2].
  fused.grid_response.resize(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    const double w = (j == grid_size - 1) ? 2.0 : j * h;
    const double pos = w * total_weight / fine_h;
    const auto k = static_cast<std::size_t>(std::floor(pos));
    double v = 0.0;
    if (k + 1 < conv.size()) {
      const double frac = pos - static_cast<double>(k);
      v = (1.0 - frac) * conv[k] + frac * conv[k + 1];
    } else if (k < conv.size()) {
      v = conv[k];
    }
    fused.grid_response[static_cast<std::size_t>(j)] = std::max(0.0, v);
  }
  const double mass = trapezoid(fused.grid_response, h);
  if (!(mass > 0.0)) throw Error("fuse_filters: fused response has no mass");
  for (double& v : fused.grid_response) v /= mass;

  const auto& samples = fused.grid_response;
  auto response = [&samples, h, grid_size](double w) {
    const double pos = w / h;
    const auto k = std::min(static_cast<std::size_t>(std::floor(pos)), static_cast<std::size_t>(grid_size - 1));
    if (k + 1 >= samples.size()) return samples.back();
    const double frac = pos - static_cast<double>(k);
    return (1.0 - frac) * samples[k] + frac * samples[k + 1];
  };
  const int degree = max_index - 1 + d;
  auto fit = fit_response(response, degree, std::max(grid_size, 4 * (degree + 1)));
  fused.poly = std::move(fit.series);
  fused.fit_error_linf = fit.linf_error;
  return fused;
}

}  // namespace chigad::spectral
