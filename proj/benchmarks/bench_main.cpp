// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "chigad/ad/tape.hpp"
#include "chigad/hin/laplacian.hpp"
#include "chigad/hin/meta_path.hpp"
#include "chigad/model/chigad.hpp"
#include "chigad/spectral/chi_square.hpp"
#include "chigad/spectral/polynomial.hpp"
#include "chigad/spectral/profile.hpp"
#include "chigad/train/metrics.hpp"
#include "chigad/train/synthetic.hpp"
#include "chigad/train/trainer.hpp"

namespace {

using namespace chigad;

SparseMatrix ring_with_chords(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    const Index j = (i + 1) % n;
    const Index k = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    for (Index v : {j, k}) {
      if (v == i) continue;
      t.emplace_back(i, v, 1.0);
      t.emplace_back(v, i, 1.0);
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end(), [](double, double) { return 1.0; });
  return a;
}

void BM_FitChiSquareFilter(benchmark::State& state) {
  const int i = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::make_chi_square_filter(i));
}
BENCHMARK(BM_FitChiSquareFilter)->Arg(2)->Arg(16)->Arg(128);

void BM_ApplyFilter(benchmark::State& state) {
  const Index n = state.range(0);
  const auto op = hin::laplacian(ring_with_chords(n, 1));
  const auto f = spectral::make_chi_square_filter(8);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Matrix x(n, 32);
  for (Index k = 0; k < x.size(); ++k) x(k) = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::apply_filter(f.poly, op, x));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ApplyFilter)->Arg(1000)->Arg(10000);

void BM_SparsePolyForwardBackward(benchmark::State& state) {
  const Index n = state.range(0);
  const SparseMatrix s = hin::laplacian(ring_with_chords(n, 3)).matrix;
  const Matrix x = Matrix::Random(n, 16);
  const Matrix c = Matrix::Random(8, 1);
  for (auto _ : state) {
    ad::Tape tape;
    const auto xv = tape.leaf(x);
    const auto y = ad::sparse_poly_apply(tape.leaf(c), s, xv, tape.leaf(Matrix::Ones(1, 1)), ad::PolyBasis::kShiftedChebyshev);
    tape.backward(ad::sum(y));
    benchmark::DoNotOptimize(xv.grad());
  }
}
BENCHMARK(BM_SparsePolyForwardBackward)->Arg(1000)->Arg(10000);

void BM_Auroc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  std::vector<double> s(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = u(rng);
    y[i] = u(rng) < 0.1;
  }
  for (auto _ : state) benchmark::DoNotOptimize(train::auroc(s, y));
}
BENCHMARK(BM_Auroc)->Arg(1000)->Arg(100000);

void BM_SpectralProfile(benchmark::State& state) {
  const Index n = state.range(0);
  const auto op = hin::laplacian(ring_with_chords(n, 5));
  const Matrix x = Matrix::Random(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::spectral_profile(op, x, 3));
}
BENCHMARK(BM_SpectralProfile)->Arg(100)->Arg(400);

void BM_SyntheticEpoch(benchmark::State& state) {
  const auto graph = train::generate_synthetic_hin(train::default_synthetic_spec());
  model::ModelConfig cfg;
  cfg.aligned_dim = 25;
  cfg.hidden_dim = 25;
  cfg.mlp_layers = 2;
  cfg.path_min = 1;
  cfg.path_max = 2;
  auto net = model::ChiGadModel::build(graph, cfg);
  const auto data = train::make_train_data(graph);
  train::TrainConfig tc;
  tc.learning_rate = 0.006;
  tc.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train::train(net, data, tc));
}
BENCHMARK(BM_SyntheticEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
