// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chigad/hin/laplacian.hpp"
#include "chigad/spectral/alignment.hpp"
#include "chigad/spectral/chi_square.hpp"
#include "chigad/spectral/fusion.hpp"
#include "chigad/spectral/polynomial.hpp"
#include "chigad/spectral/profile.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace chigad {
namespace {

using namespace spectral;

const std::vector<int> kCandidates{1, 2, 4, 8, 16, 32, 64, 128};

using oracle::simpson;

TEST(ChiSquare, NormalizationMatchesIncompleteGamma) {
  for (int i : kCandidates) EXPECT_NEAR(normalization_constant(i) / oracle::chi_normalizer(i), 1.0, 1e-10) << i;
}

TEST(ChiSquare, ResponseIntegratesToOne) {
  for (int i : {1, 2, 3, 8, 32}) {
    EXPECT_NEAR(simpson([i](double w) { return chi_response(i, w); }, 0.0, 2.0), 1.0, 1e-8) << i;
  }
}

TEST(ChiSquare, ResponseRejectsOutsideDomain) {
  EXPECT_THROW(chi_response(2, -0.1), Error);
  EXPECT_THROW(chi_response(2, 2.1), Error);
  EXPECT_THROW(chi_unnormalized(0, 1.0), Error);
}

TEST(ChiSquare, ModeMatchesGridArgmax) {
  for (int i : kCandidates) {
    double best = -1.0;
    double arg = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double w = 2.0 * k / 200000.0;
      const double v = chi_response(i, w);
      if (v > best) {
        best = v;
        arg = w;
      }
    }
    EXPECT_NEAR(chi_mode(i), arg, 2e-5) << i;
  }
}

TEST(ChiSquare, ReferenceModesAndExpectations) {
  struct Row {
    int i;
    double expectation;
    double mode;
  };
  const Row table[] = {{1, 0.6970, 0.0000},  {2, 0.9603, 0.6667},  {4, 1.2180, 1.1992},  {8, 1.4313, 1.5556},
                       {16, 1.5940, 1.7638}, {32, 1.7126, 1.8779}, {64, 1.7973, 1.9339}, {128, 1.8571, 1.9600}};
  for (const auto& row : table) {
    if (row.i == 128) {
      EXPECT_NEAR(chi_mode(row.i) / row.mode, 1.0, 0.01);
    } else {
      EXPECT_NEAR(chi_mode(row.i), row.mode, 0.01) << row.i;
    }
    EXPECT_NEAR(chi_moments(row.i).expectation, row.expectation, 0.02) << row.i;
  }
}

TEST(ChiSquare, MomentsMatchSimpson) {
  for (int i : {1, 2, 4, 8}) {
    const double e = simpson([i](double w) { return w * chi_response(i, w); }, 0.0, 2.0);
    const double v = simpson([i, e](double w) { return (w - e) * (w - e) * chi_response(i, w); }, 0.0, 2.0);
    const auto m = chi_moments(i);
    EXPECT_NEAR(m.expectation, e, 1e-8);
    EXPECT_NEAR(m.variance, v, 1e-8);
  }
}

TEST(ChiSquare, VarianceShrinksWithIndex) {
  double last = chi_moments(2).variance;
  for (int i : {4, 8, 16, 32, 64, 128}) {
    const double v = chi_moments(i).variance;
    EXPECT_LT(v, last) << i;
    last = v;
  }
}

TEST(Admissibility, QuadratureMatchesClosedForm) {
  for (int i = 2; i <= 10; ++i) {
    const double q = admissibility_integral(i);
    EXPECT_NEAR(q / oracle::admissibility(i), 1.0, 1e-6) << i;
    EXPECT_NEAR(admissibility_closed_form(i) / oracle::admissibility(i), 1.0, 1e-10) << i;
    EXPECT_GT(q, 0.0);
  }
}

TEST(Admissibility, IndexOneDiverges) {
  try {
    admissibility_integral(1);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("not admissible"), std::string::npos);
  }
  EXPECT_THROW(admissibility_closed_form(1), Error);
}

TEST(Chebyshev, MonomialRoundTrip) {
  const std::vector<double> mono{0.5, -1.25, 2.0, 0.75};
  const auto series = ChebyshevSeries::from_monomial(mono);
  const auto back = series.monomial();
  ASSERT_EQ(back.size(), mono.size());
  for (std::size_t k = 0; k < mono.size(); ++k) EXPECT_NEAR(back[k], mono[k], 1e-12);
  for (double w : {0.0, 0.3, 1.0, 1.7, 2.0}) {
    const double direct = mono[0] + w * (mono[1] + w * (mono[2] + w * mono[3]));
    EXPECT_NEAR(series(w), direct, 1e-12);
  }
}

TEST(Chebyshev, ApplyFilterMatchesEigenDecomposition) {
  std::mt19937_64 rng(5);
  const auto op = hin::laplacian(testing::random_graph(12, 0.3, rng));
  const Matrix x = testing::random_matrix(12, 3, rng);
  const auto filter = make_chi_square_filter(4);
  Eigen::SelfAdjointEigenSolver<Matrix> eig{Matrix(op.matrix)};
  Vector response(12);
  for (Index k = 0; k < 12; ++k) response(k) = filter.poly(eig.eigenvalues()(k));
  const Matrix expected = eig.eigenvectors() * response.asDiagonal() * eig.eigenvectors().transpose() * x;
  EXPECT_LT((apply_filter(filter.poly, op, x) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Fit, DegreeIsIndexMinusOnePlusBudget) {
  for (int i : kCandidates) {
    const auto f = make_chi_square_filter(i, 3);
    EXPECT_EQ(f.degree(), i - 1 + 3) << i;
  }
  EXPECT_EQ(make_chi_square_filter(5, 1).degree(), 5);
}

TEST(Fit, ErrorIsSmallForPeakedFilters) {
  for (int i : {8, 16, 32, 64, 128}) {
    const auto f = make_chi_square_filter(i);
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double w = 2.0 * k / 400.0;
      worst = std::max(worst, std::abs(f.poly(w) - chi_response(i, w)));
    }
    EXPECT_LT(worst, 1e-3) << i;
    EXPECT_NEAR(worst, f.fit_error_linf, 1e-3) << i;
  }
}

// Delta on a path graph: a degree-D filter reaches exactly D hops.
TEST(Locality, FittedFiltersStayWithinDegreeHops) {
  for (int i : kCandidates) {
    const auto f = make_chi_square_filter(i);
    const int degree = f.degree();
    const Index n = 2 * degree + 8;
    const auto op = hin::laplacian(testing::path_graph(n));
    Matrix delta = Matrix::Zero(n, 1);
    const Index centre = n / 2;
    delta(centre, 0) = 1.0;
    const Matrix y = apply_filter(f.poly, op, delta);
    for (Index v = 0; v < n; ++v) {
      if (std::abs(v - centre) > degree) EXPECT_EQ(y(v, 0), 0.0) << "i=" << i << " node " << v;
    }
  }
}

TEST(Profile, ParsevalAndBands) {
  std::mt19937_64 rng(7);
  const auto op = hin::laplacian(testing::random_graph(25, 0.2, rng));
  const Matrix x = testing::random_matrix(25, 4, rng);
  const auto profile = spectral_profile(op, x, 5);
  const double total = x.rowwise().sum().squaredNorm();
  EXPECT_NEAR(profile.energies.sum(), total, 1e-9 * total);
  const double bands = std::accumulate(profile.band_energies.begin(), profile.band_energies.end(), 0.0);
  EXPECT_NEAR(bands, total, 1e-9 * total);
  ASSERT_EQ(profile.band_starts.size(), 5U);
  for (std::size_t b = 1; b < profile.band_starts.size(); ++b) EXPECT_EQ(profile.band_starts[b], 5 * static_cast<Index>(b));
  const auto best = std::max_element(profile.band_energies.begin(), profile.band_energies.end());
  EXPECT_EQ(profile.argmax_band, static_cast<int>(best - profile.band_energies.begin()));
  EXPECT_GE(profile.band_max, profile.eigenvalues(profile.band_starts[profile.argmax_band]));
}

TEST(Profile, CapAndBandCountEnforced) {
  std::mt19937_64 rng(8);
  const auto op = hin::laplacian(testing::random_graph(10, 0.3, rng));
  const Matrix x = testing::random_matrix(10, 2, rng);
  EXPECT_THROW(spectral_profile(op, x, 11), Error);
  EXPECT_THROW(spectral_profile(op, x, 3, 5), Error);
}

TEST(SHigh, RayleighQuotientBounds) {
  std::mt19937_64 rng(9);
  const auto op = hin::laplacian(testing::random_graph(15, 0.3, rng));
  Eigen::SelfAdjointEigenSolver<Matrix> eig{Matrix(op.matrix)};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = testing::random_matrix(15, 1, rng).col(0);
    const double s = s_high(x, op);
    EXPECT_GE(s, eig.eigenvalues()(0) - 1e-12);
    EXPECT_LE(s, eig.eigenvalues()(14) + 1e-12);
  }
  EXPECT_NEAR(s_high(eig.eigenvectors().col(14), op), eig.eigenvalues()(14), 1e-10);
  EXPECT_THROW(s_high(Vector::Zero(15), op), Error);
}

TEST(Representatives, ThreeDivisionsByRank) {
  const std::vector<double> scores{0.9, 0.1, 0.5, 0.3, 0.7, 0.2};
  const auto split = select_representatives(scores);
  EXPECT_FALSE(split.degenerate);
  // ranks: 0.1(1) 0.2(5) | 0.3(3) 0.5(2) | 0.7(4) 0.9(0)
  EXPECT_EQ(split.labels[1], Division::kLow);
  EXPECT_EQ(split.labels[5], Division::kLow);
  EXPECT_EQ(split.labels[3], Division::kMid);
  EXPECT_EQ(split.labels[2], Division::kMid);
  EXPECT_EQ(split.labels[4], Division::kHigh);
  EXPECT_EQ(split.labels[0], Division::kHigh);
  EXPECT_EQ(split.representatives, (std::vector<std::size_t>{1, 3, 4}));
}

TEST(Representatives, ThreeGraphsAreTheirOwnRepresentatives) {
  const std::vector<double> scores{0.4, 0.2, 0.6};
  const auto split = select_representatives(scores);
  EXPECT_EQ(split.representatives, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(Representatives, FewerThanThreeIsDegenerate) {
  const std::vector<double> scores{0.4, 0.2};
  const auto split = select_representatives(scores);
  EXPECT_TRUE(split.degenerate);
  ASSERT_EQ(split.representatives.size(), 1U);
  EXPECT_EQ(split.labels[0], Division::kMid);
  EXPECT_EQ(split.labels[1], Division::kMid);
}

TEST(Assign, NearestModeWins) {
  EXPECT_EQ(assign_filter(1.9, kCandidates), 32);
  EXPECT_EQ(assign_filter(0.0, kCandidates), 1);
  EXPECT_EQ(assign_filter(0.6667, kCandidates), 2);
  EXPECT_EQ(assign_filter(2.0, kCandidates), 128);
}

TEST(Assign, ResultIgnoresCandidateOrder) {
  const std::vector<int> up{2, 4};
  const std::vector<int> down{4, 2};
  const double mid = 0.5 * (chi_mode(2) + chi_mode(4));
  for (int k = -50; k <= 50; ++k) {
    const double b = mid + k * 1e-17;
    EXPECT_EQ(assign_filter(b, up), assign_filter(b, down)) << k;
  }
  EXPECT_EQ(assign_filter(mid - 1e-9, down), 2);
  EXPECT_EQ(assign_filter(mid + 1e-9, up), 4);
}

TEST(Fusion, SingleContributorReturnsFilterUnchanged) {
  const DivisionFilter only[] = {{Division::kMid, 8}};
  const auto fused = fuse_filters(only, Division::kMid, 0.1);
  const auto direct = make_chi_square_filter(8);
  EXPECT_EQ(fused.poly.coefficients(), direct.poly.coefficients());
}

TEST(Fusion, EqualIndicesKeepTheMode) {
  for (int i : {2, 4, 8, 16, 32}) {
    const DivisionFilter divs[] = {{Division::kLow, i}, {Division::kMid, i}, {Division::kHigh, i}};
    const auto fused = fuse_filters(divs, Division::kMid, 0.1);
    const double h = 2.0 / (fused.grid_response.size() - 1);
    const auto peak = std::max_element(fused.grid_response.begin(), fused.grid_response.end());
    const double mode = h * static_cast<double>(peak - fused.grid_response.begin());
    EXPECT_NEAR(mode, chi_mode(i), 0.1) << i;
    EXPECT_NEAR(trapezoid(fused.grid_response, h), 1.0, 1e-9);
    EXPECT_EQ(fused.degree(), i - 1 + 3);
  }
}

TEST(Fusion, ConvolutionOfBoxesIsTriangle) {
  const std::vector<double> box(11, 1.0);  // unit box on [0, 1], h = 0.1
  const auto tri = convolve_sampled(box, box, 0.1);
  ASSERT_EQ(tri.size(), 21U);
  EXPECT_NEAR(tri[10], 1.0, 1e-12);
  EXPECT_NEAR(tri[5], 0.5, 1e-12);
  EXPECT_NEAR(trapezoid(tri, 0.1), 1.0, 1e-12);
}

TEST(Fusion, OwnDivisionDominates) {
  const DivisionFilter divs[] = {{Division::kLow, 2}, {Division::kMid, 16}, {Division::kHigh, 64}};
  const auto fused = fuse_filters(divs, Division::kHigh, 0.05);
  const double h = 2.0 / (fused.grid_response.size() - 1);
  const auto peak = std::max_element(fused.grid_response.begin(), fused.grid_response.end());
  EXPECT_GT(h * static_cast<double>(peak - fused.grid_response.begin()), 1.5);
}

// Random signals on random graphs: the best combination reaches the best
// single signal's high-frequency area.
class AlignmentSearch : public ::testing::TestWithParam<int> {};

TEST_P(AlignmentSearch, SearchAttainsBestIndividualSignal) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  std::mt19937_64 rng(seed);
  const Index n = 6 + static_cast<Index>(rng() % 10);
  const Index k = 1 + static_cast<Index>(rng() % 5);
  const auto op = hin::laplacian(testing::random_graph(n, 0.35, rng));
  const Matrix signals = testing::random_matrix(n, k, rng);
  double best = 0.0;
  for (Index j = 0; j < k; ++j) best = std::max(best, s_high(signals.col(j), op));
  const auto result = theorem1_search(signals, op, 8, seed);
  EXPECT_GE(result.s_high, best - 1e-3);
  EXPECT_NEAR(s_high(signals * result.weights, op), result.s_high, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Graphs, AlignmentSearch, ::testing::Range(0, 20));

}  // namespace
}  // namespace chigad
