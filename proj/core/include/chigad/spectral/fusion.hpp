// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "chigad/spectral/chi_square.hpp"
#include "chigad/spectral/profile.hpp"

namespace chigad::spectral {

/// Filter chosen for one division.
struct DivisionFilter {
  Division division = Division::kMid;
  int index = 1;
};

/// Filter assigned to a single meta-path graph after fusing the division filters.
struct FusedFilter {
  /// Response sampled on a uniform grid over [0, 2]; unit integral.
  std::vector<double> grid_response;
  ChebyshevSeries poly;
  double fit_error_linf = 0.0;
  std::vector<DivisionFilter> contributors;
  std::vector<double> weights;  // parallel to contributors

  int degree() const { return poly.degree(); }
};

inline constexpr int kFusionGrid = 1024;

/// Fuses the division filters for a graph ranked into `own`.
///
/// Each contributor b enters as the law of a_b X_b with X_b ~ f_{i_b},
/// a_b = 1 for the own division and w_d otherwise, i.e. density
/// (1/a_b) f_{i_b}(x / a_b). The densities are convolved numerically, the
/// support [0, 2 sum a_b] is rescaled back onto [0, 2], renormalized, and
/// fitted with degree max(i_b) - 1 + d. With one contributor the filter is
/// returned unchanged.
FusedFilter fuse_filters(std::span<const DivisionFilter> divisions, Division own, double w_d,
                         int d = 3, int grid_size = kFusionGrid);

/// Trapezoid-rule linear convolution of two densities sampled with spacing h
/// from 0. Output has a.size() + b.size() - 1 samples with the same spacing.
std::vector<double> convolve_sampled(std::span<const double> a, std::span<const double> b, double h);

/// Trapezoid integral of samples with spacing h.
double trapezoid(std::span<const double> samples, double h);

}  // namespace chigad::spectral
