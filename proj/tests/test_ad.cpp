// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "chigad/ad/tape.hpp"
#include "chigad/hin/laplacian.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace chigad {
namespace {

using ad::Tape;
using ad::Var;
using testing::numeric_gradient;
using testing::random_matrix;
using testing::relative_error;

constexpr double kStep = 1e-5;
constexpr double kTol = 1e-4;

TEST(Tape, MatmulIdentityPreserved) {
  Tape t;
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  const Var y = ad::matmul(t.leaf(a), t.leaf(Matrix::Identity(2, 2)));
  EXPECT_EQ(y.value(), a);
}

TEST(Tape, MatmulShapeMismatchThrows) {
  Tape t;
  EXPECT_THROW(ad::matmul(t.leaf(Matrix::Ones(2, 3)), t.leaf(Matrix::Ones(2, 3))), Error);
}

TEST(Tape, ScaleByZeroGivesZeroOutputAndInputGradient) {
  Tape t;
  const Var a = t.leaf(Matrix::Constant(2, 3, 5.0));
  const Var s = t.leaf(Matrix::Zero(1, 1));
  const Var y = ad::scale(a, s);
  EXPECT_TRUE(y.value().isZero(0.0));
  t.backward(ad::sum(y));
  EXPECT_TRUE(a.grad().isZero(0.0));
  EXPECT_DOUBLE_EQ(s.grad()(0, 0), 30.0);
}

TEST(Tape, SumGradientIsOnes) {
  Tape t;
  const Var w = t.leaf(Matrix::Random(3, 3));
  t.backward(ad::sum(w));
  EXPECT_EQ(w.grad(), Matrix::Ones(3, 3));
}

TEST(Tape, FanOutGradientsAccumulate) {
  Tape t;
  const Var x = t.leaf(Matrix::Constant(2, 2, 3.0));
  t.backward(ad::sum(ad::add(x, x)));
  EXPECT_EQ(x.grad(), Matrix::Constant(2, 2, 2.0));
}

TEST(Tape, NonScalarRootRejected) {
  Tape t;
  const Var x = t.leaf(Matrix::Ones(2, 2));
  EXPECT_THROW(t.backward(x), Error);
}

TEST(Tape, DoubleBackwardRejectedUntilReset) {
  Tape t;
  const Var loss = ad::sum(t.leaf(Matrix::Ones(2, 2)));
  t.backward(loss);
  EXPECT_THROW(t.backward(loss), Error);
  t.reset();
  const Var again = ad::sum(t.leaf(Matrix::Ones(2, 2)));
  EXPECT_NO_THROW(t.backward(again));
}

TEST(Tape, ConstantsReceiveNoGradient) {
  Tape t;
  const Var c = t.constant(Matrix::Ones(2, 2));
  const Var w = t.leaf(Matrix::Ones(2, 2));
  t.backward(ad::sum(ad::matmul(c, w)));
  EXPECT_FALSE(t.requires_grad(c.id()));
  EXPECT_TRUE(c.grad().isZero(0.0));
}

TEST(Tape, ReplayInCreationOrderIsDeterministic) {
  auto run = [] {
    std::mt19937_64 rng(3);
    Tape t;
    const Var a = t.leaf(random_matrix(4, 3, rng));
    const Var b = t.leaf(random_matrix(3, 2, rng));
    const Var h = ad::activation(ad::matmul(a, b), ad::Activation::kTanh);
    const Var loss = ad::sum(ad::elementwise_mul(h, ad::add(h, h)));
    t.backward(loss);
    return std::pair{a.grad(), b.grad()};
  };
  const auto first = run();
  const auto second = run();
  EXPECT_EQ(first.first, second.first);
  EXPECT_EQ(first.second, second.second);
}

TEST(Activation, ReluLeakyValues) {
  Tape t;
  Matrix x(1, 3);
  x << -1.0, 0.0, 2.0;
  const Var in = t.leaf(x);
  const Var relu = ad::activation(in, ad::Activation::kRelu);
  const Var leaky = ad::activation(in, ad::Activation::kLeakyRelu);
  EXPECT_EQ(relu.value()(0, 0), 0.0);
  EXPECT_EQ(relu.value()(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(leaky.value()(0, 0), -0.01);
  t.backward(ad::sum(relu));
  EXPECT_EQ(in.grad()(0, 1), 0.0);  // subgradient at the kink
}

TEST(SoftmaxCe, PerfectLogitsGiveNearZeroLoss) {
  Tape t;
  Matrix z(2, 2);
  z << 20, -20, -20, 20;
  const int labels[] = {0, 1};
  const double w[] = {1, 1};
  const Var loss = ad::weighted_softmax_ce(t.leaf(z), labels, w, {true, true});
  EXPECT_LT(loss.value()(0, 0), 1e-15);
}

TEST(SoftmaxCe, UniformLogitsGiveLogTwo) {
  Tape t;
  const int labels[] = {1};
  const double w[] = {1};
  const Var loss = ad::weighted_softmax_ce(t.leaf(Matrix::Zero(1, 2)), labels, w, {true});
  EXPECT_NEAR(loss.value()(0, 0), std::log(2.0), 1e-15);
}

TEST(SoftmaxCe, EmptyMaskThrows) {
  Tape t;
  const int labels[] = {1};
  const double w[] = {1};
  EXPECT_THROW(ad::weighted_softmax_ce(t.leaf(Matrix::Zero(1, 2)), labels, w, {false}), Error);
}

TEST(SoftmaxCe, LargeLogitsStayFinite) {
  Tape t;
  Matrix z(1, 2);
  z << 1000.0, -1000.0;
  const int labels[] = {1};
  const double w[] = {1};
  const Var loss = ad::weighted_softmax_ce(t.leaf(z), labels, w, {true});
  EXPECT_NEAR(loss.value()(0, 0), 2000.0, 1e-9);
}

TEST(SparsePoly, ConstantPolynomialIsIdentityWithZeroWeightGradient) {
  Tape t;
  const SparseMatrix s = hin::laplacian(testing::path_graph(4)).matrix;
  std::mt19937_64 rng(1);
  const Var x = t.leaf(random_matrix(4, 2, rng));
  const Var w = t.leaf(Matrix::Constant(1, 1, 0.7));
  const Var y = ad::sparse_poly_apply(t.constant(Matrix::Ones(1, 1)), s, x, w);
  EXPECT_EQ(y.value(), x.value());
  t.backward(ad::sum(y));
  EXPECT_EQ(w.grad()(0, 0), 0.0);
}

TEST(SparsePoly, LinearTermOnSingleEdge) {
  Tape t;
  const SparseMatrix s = hin::laplacian(testing::path_graph(2), hin::OperatorKind::kUnnormalizedLaplacian).matrix;
  Matrix x(2, 1);
  x << 1, -1;
  Matrix c(2, 1);
  c << 0, 1;
  const Var xv = t.leaf(x);
  const Var w = t.leaf(Matrix::Ones(1, 1));
  const Var y = ad::sparse_poly_apply(t.constant(c), s, xv, w);
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(y.value()(1, 0), -2.0);
  t.backward(ad::sum(y));
  auto f = [&](const Matrix& wm) {
    Tape u;
    return ad::sum(ad::sparse_poly_apply(u.constant(c), s, u.constant(x), u.leaf(wm))).value()(0, 0);
  };
  EXPECT_LT(relative_error(w.grad(), numeric_gradient(f, Matrix::Ones(1, 1), kStep), 1e-12), kTol);
}

TEST(SparsePoly, DimensionMismatchThrows) {
  Tape t;
  const SparseMatrix s = hin::laplacian(testing::path_graph(3)).matrix;
  EXPECT_THROW(ad::sparse_poly_apply(t.constant(Matrix::Ones(2, 1)), s, t.leaf(Matrix::Ones(4, 1)),
                                     t.leaf(Matrix::Ones(1, 1))),
               Error);
}

TEST(SparsePoly, DisconnectedComponentsStayIndependent) {
  // Two disjoint edges: signal on the first never reaches the second.
  std::vector<Triplet> trip{{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}};
  SparseMatrix a(4, 4);
  a.setFromTriplets(trip.begin(), trip.end());
  const SparseMatrix s = hin::laplacian(a).matrix;
  Matrix x = Matrix::Zero(4, 1);
  x(0, 0) = 1.0;
  Matrix c(6, 1);
  c << 0.3, -1.2, 0.5, 2.0, -0.1, 0.7;
  for (auto basis : {ad::PolyBasis::kMonomial, ad::PolyBasis::kShiftedChebyshev}) {
    Tape t;
    const Var y = ad::sparse_poly_apply(t.constant(c), s, t.leaf(x), t.leaf(Matrix::Constant(1, 1, 0.9)), basis);
    EXPECT_EQ(y.value()(2, 0), 0.0);
    EXPECT_EQ(y.value()(3, 0), 0.0);
  }
}

// Every differentiable op against central differences on randomized shapes.
class OpGradients : public ::testing::TestWithParam<int> {};

TEST_P(OpGradients, MatchFiniteDifferences) {
  for (const auto& e : oracle::op_gradient_errors(static_cast<std::uint64_t>(GetParam()))) {
    EXPECT_LT(e.error, kTol) << e.name;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OpGradients, ::testing::Range(0, 50));

TEST(SparsePoly, MatchesDensePowersInBothBases) {
  std::mt19937_64 rng(11);
  for (Index n = 2; n <= 20; n += 3) {
    const SparseMatrix s = hin::laplacian(testing::random_graph(n, 0.4, rng)).matrix;
    const Matrix x = random_matrix(n, 3, rng);
    const Matrix c = random_matrix(6, 1, rng);
    const double w = 0.85;
    for (auto basis : {ad::PolyBasis::kMonomial, ad::PolyBasis::kShiftedChebyshev}) {
      Tape t;
      const Var y = ad::sparse_poly_apply(t.constant(c), s, t.constant(x), t.constant(Matrix::Constant(1, 1, w)), basis);
      EXPECT_LT((y.value() - oracle::dense_poly_apply(c, Matrix(s), x, w, basis)).cwiseAbs().maxCoeff(), 1e-10) << n;
    }
  }
}

}  // namespace
}  // namespace chigad
