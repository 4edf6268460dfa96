// SPDX-License-Identifier: Apache-2.0
//
// One PASS/FAIL line per acceptance criterion. A criterion fails when its
// check fails or when it overruns its time budget. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chigad/hin/laplacian.hpp"
#include "chigad/hin/meta_path.hpp"
#include "chigad/spectral/alignment.hpp"
#include "chigad/spectral/chi_square.hpp"
#include "chigad/spectral/polynomial.hpp"
#include "chigad/train/loss.hpp"
#include "chigad/train/metrics.hpp"
#include "chigad/train/trainer.hpp"
#include "commands.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace chigad;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const std::vector<int> kCandidates{1, 2, 4, 8, 16, 32, 64, 128};

Check filter_table() {
  struct Row {
    int i;
    double expectation;
    double mode;
  };
  const Row table[] = {{1, 0.6970, 0.0000},  {2, 0.9603, 0.6667},  {4, 1.2180, 1.1992},  {8, 1.4313, 1.5556},
                       {16, 1.5940, 1.7638}, {32, 1.7126, 1.8779}, {64, 1.7973, 1.9339}, {128, 1.8571, 1.9600}};
  Check c;
  double worst_mode = 0.0;
  double worst_e = 0.0;
  for (const auto& row : table) {
    const double mode = spectral::chi_mode(row.i);
    const double e = spectral::chi_moments(row.i).expectation;
    const double mode_err = row.i == 128 ? std::abs(mode / row.mode - 1.0) : std::abs(mode - row.mode);
    worst_mode = std::max(worst_mode, mode_err);
    worst_e = std::max(worst_e, std::abs(e - row.expectation));
    c.require(mode_err <= 0.01, fmt("i=%d mode %.4f vs %.4f", row.i, mode, row.mode));
    c.require(std::abs(e - row.expectation) <= 0.02, fmt("i=%d expectation %.4f vs %.4f", row.i, e, row.expectation));
  }
  if (c.ok) c.detail = fmt("worst mode err %.2e, worst expectation err %.4f", worst_mode, worst_e);
  return c;
}

Check admissibility() {
  Check c;
  double worst = 0.0;
  for (int i = 2; i <= 10; ++i) {
    const double rel = std::abs(spectral::admissibility_integral(i) / oracle::admissibility(i) - 1.0);
    worst = std::max(worst, rel);
    c.require(rel <= 1e-6, fmt("i=%d relative error %.2e", i, rel));
  }
  bool rejected = false;
  try {
    spectral::admissibility_integral(1);
  } catch (const Error&) {
    rejected = true;
  }
  c.require(rejected, "i=1 was not rejected");
  if (c.ok) c.detail = fmt("worst relative error %.2e, i=1 rejected", worst);
  return c;
}

Check theorem1() {
  Check c;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const Index n = 6 + static_cast<Index>(rng() % 10);
    const Index k = 1 + static_cast<Index>(rng() % 5);
    const auto op = hin::laplacian(testing::random_graph(n, 0.35, rng));
    const Matrix signals = testing::random_matrix(n, k, rng);
    double best = 0.0;
    for (Index j = 0; j < k; ++j) best = std::max(best, spectral::s_high(signals.col(j), op));
    const auto result = spectral::theorem1_search(signals, op, 8, seed);
    worst = std::max(worst, best - result.s_high);
    c.require(result.s_high >= best - 1e-3, fmt("seed %llu: %.6f < %.6f", static_cast<unsigned long long>(seed), result.s_high, best));
  }
  if (c.ok) c.detail = fmt("20 graphs, worst shortfall %.2e", worst);
  return c;
}

Check gradients() {
  Check c;
  double worst_op = 0.0;
  double worst_model = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const auto& e : oracle::op_gradient_errors(seed)) {
      worst_op = std::max(worst_op, e.error);
      c.require(e.error < 1e-4, fmt("seed %llu op %s: %.2e", static_cast<unsigned long long>(seed), e.name.c_str(), e.error));
    }
    const auto graph = oracle::gradient_graph(seed);
    auto net = oracle::gradient_model(graph, seed);
    for (const auto& e : oracle::model_gradient_errors(net, train::make_train_data(graph).labels)) {
      worst_model = std::max(worst_model, e.error);
      c.require(e.error < 1e-3, fmt("seed %llu param %s: %.2e", static_cast<unsigned long long>(seed), e.name.c_str(), e.error));
    }
  }
  if (c.ok) c.detail = fmt("50 seeds, worst op %.2e, worst end-to-end %.2e", worst_op, worst_model);
  return c;
}

hin::HeteroGraph schema_graph(int types, const std::vector<std::pair<int, int>>& relations) {
  std::vector<std::pair<Index, Index>> shapes(static_cast<std::size_t>(types), {3, 1});
  std::vector<testing::RelationShape> rels;
  for (const auto& [s, d] : relations) rels.push_back({s, d, 0.5});
  return testing::random_hin(shapes, rels, 1);
}

Check oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(17);
  int schemas = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int types = 1 + static_cast<int>(rng() % 5);
    const int relations = 1 + static_cast<int>(rng() % 6);
    std::vector<std::pair<int, int>> rels;
    for (int r = 0; r < relations; ++r) rels.emplace_back(static_cast<int>(rng() % types), static_cast<int>(rng() % types));
    const auto g = schema_graph(types, rels);
    for (int anchor = 0; anchor < types; ++anchor) {
      c.require(hin::enumerate_meta_paths(g, anchor, 1, 4) == oracle::meta_paths(g, anchor, 1, 4),
                fmt("meta-path enumeration differs on schema %d anchor %d", trial, anchor));
    }
    ++schemas;
  }
  int paths = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::random_hin({{30, 2}, {20, 2}, {8, 1}}, {{0, 1, 0.1}, {1, 0, 0.1}, {0, 0, 0.05}, {1, 2, 0.2}, {2, 1, 0.2}}, seed);
    for (const auto& path : hin::enumerate_meta_paths(g, 0, 1, 3)) {
      const Matrix got(hin::materialize_meta_path_graph(g, path).adjacency);
      const Matrix want(oracle::walk_adjacency(g, path));
      c.require(got == want, "materialization differs on " + path.describe(g));
      ++paths;
    }
  }
  std::mt19937_64 r2(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + r2() % 199;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(r2() % 25) / 25.0;
      y[i] = static_cast<int>(r2() % 3 == 0);
    }
    y[0] = 1;
    y[1] = 0;
    const double diff = std::abs(train::auroc(s, y) - oracle::all_pairs_auroc(s, y));
    c.require(diff <= 1e-10, fmt("AUROC differs by %.2e at trial %d", diff, trial));
  }
  double worst_poly = 0.0;
  std::mt19937_64 r3(11);
  for (Index n = 2; n <= 20; ++n) {
    const SparseMatrix s = hin::laplacian(testing::random_graph(n, 0.4, r3)).matrix;
    const Matrix x = testing::random_matrix(n, 3, r3);
    const Matrix coeffs = testing::random_matrix(6, 1, r3);
    for (auto basis : {ad::PolyBasis::kMonomial, ad::PolyBasis::kShiftedChebyshev}) {
      ad::Tape t;
      const Matrix y = ad::sparse_poly_apply(t.constant(coeffs), s, t.constant(x), t.constant(Matrix::Constant(1, 1, 0.85)), basis).value();
      const double err = (y - oracle::dense_poly_apply(coeffs, Matrix(s), x, 0.85, basis)).cwiseAbs().maxCoeff();
      worst_poly = std::max(worst_poly, err);
      c.require(err <= 1e-10, fmt("sparse_poly_apply differs by %.2e at n=%lld", err, static_cast<long long>(n)));
    }
  }
  if (c.ok) c.detail = fmt("%d schemas, %d meta-paths, 200 AUROC sets, poly err %.1e", schemas, paths, worst_poly);
  return c;
}

Check loss_identities() {
  Check c;
  const auto graph = testing::random_hin({{20, 3}, {8, 2}}, {{0, 0, 0.2}, {0, 1, 0.3}}, 5);
  auto cfg = oracle::gradient_model_config(5);
  auto net = model::ChiGadModel::build(graph, cfg);
  const auto data = train::make_train_data(graph);
  const double weighted = train::evaluate_loss(net, data, {1.0, 1.0});
  const Matrix p = net.probabilities();
  double ce = 0.0;
  for (Index i : data.train) ce -= std::log(p(i, data.labels[static_cast<std::size_t>(i)] == 1 ? 1 : 0));
  ce /= static_cast<double>(data.train.size());
  c.require(std::abs(weighted - ce) <= 1e-12, fmt("H=L=1 loss %.15f vs CE %.15f", weighted, ce));

  train::ContributionVector cv;
  cv.c = Vector(3);
  cv.c << 0.2, 0.7, 0.45;
  cv.c_min = 0.2;
  cv.c_max = 0.7;
  const std::vector<int> labels{1, 1, 0};
  const auto w = train::cc_weights(cv, labels, {2.2, 1.8});
  c.require(w[0] == 2.2 && w[1] == 1.8 && w[2] == 1.0, fmt("weights %.17g %.17g %.17g", w[0], w[1], w[2]));

  train::TrainConfig tc;
  tc.learning_rate = 0.01;
  tc.epochs = 50;
  tc.loss = {2.2, 1.8};
  const auto result = train::train(net, data, tc);
  double worst = 0.0;
  for (const auto& rec : result.history) {
    const double gap = std::abs(rec.contribution_sum - rec.contribution_dims);
    worst = std::max(worst, gap);
    c.require(gap <= 1e-9, fmt("epoch %d: sum c = %.12f, dims %d", rec.epoch, rec.contribution_sum, rec.contribution_dims));
  }
  if (c.ok) c.detail = fmt("CE gap %.1e, decomposition gap %.1e over %zu epochs", std::abs(weighted - ce), worst, result.history.size());
  return c;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

cli::RunConfig desk_config(const fs::path& graph, const std::string& mode, std::uint64_t seed) {
  auto cfg = cli::RunConfig::parse(read_text(fs::path(CHIGAD_CONFIG_DIR) / "desk_synthetic.conf") + "\ngraph = " + graph.string() +
                                   "\nfilter_mode = " + mode + "\n");
  cfg.set_seed(seed);
  return cfg;
}

struct Means {
  double auroc = 0.0;
  double auprc = 0.0;
  double f1 = 0.0;
};

Check synthetic_detection(const fs::path& work) {
  Check c;
  const fs::path spec = fs::path(CHIGAD_CONFIG_DIR) / "desk_synthetic.spec";
  Means chi;
  Means low;
  std::string per_seed;
  const int seeds = 10;
  for (int s = 1; s <= seeds; ++s) {
    const fs::path dir = work / ("synthetic_seed" + std::to_string(s));
    fs::create_directories(dir);
    cli::cmd_synth(spec, static_cast<std::uint64_t>(s), dir);
    for (const char* mode : {"chi", "lowpass"}) {
      const auto r = cli::cmd_train(desk_config(dir / "graph.json", mode, static_cast<std::uint64_t>(s)), dir / mode);
      Means& m = std::string(mode) == "chi" ? chi : low;
      m.auroc += r.test.auroc / seeds;
      m.auprc += r.test.auprc / seeds;
      m.f1 += r.test.f1_macro / seeds;
      if (std::string(mode) == "chi") per_seed += fmt("%s%.2f", s == 1 ? "" : " ", r.test.auroc);
    }
  }
  const std::string summary = fmt("chi auroc %.3f auprc %.3f f1 %.3f | lowpass auroc %.3f auprc %.3f f1 %.3f | chi per seed [%s]",
                                  chi.auroc, chi.auprc, chi.f1, low.auroc, low.auprc, low.f1, per_seed.c_str());
  c.require(chi.auroc >= 0.85, "mean AUROC below 0.85");
  c.require(chi.auroc > low.auroc, "AUROC not above low-pass");
  c.require(chi.auprc > low.auprc, "AUPRC not above low-pass");
  c.require(chi.f1 > low.f1, "F1-macro not above low-pass");
  c.detail = c.ok ? summary : c.detail + "; " + summary;
  return c;
}

Check locality() {
  Check c;
  int worst_reach = 0;
  for (int i : kCandidates) {
    const auto f = spectral::make_chi_square_filter(i);
    const int degree = f.degree();
    c.require(degree == i - 1 + 3, fmt("i=%d fitted degree %d", i, degree));
    const Index n = 2 * degree + 8;
    const auto op = hin::laplacian(testing::path_graph(n));
    Matrix delta = Matrix::Zero(n, 1);
    const Index centre = n / 2;
    delta(centre, 0) = 1.0;
    const Matrix y = spectral::apply_filter(f.poly, op, delta);
    for (Index v = 0; v < n; ++v) {
      const auto hops = static_cast<int>(std::abs(v - centre));
      if (y(v, 0) != 0.0) worst_reach = std::max(worst_reach, hops - degree);
      c.require(hops <= degree || y(v, 0) == 0.0, fmt("i=%d nonzero at %d hops > degree %d", i, hops, degree));
    }
  }
  if (c.ok) c.detail = "8 filters exactly zero beyond their degree";
  return c;
}

std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.emplace_back(fs::relative(entry.path(), root).string(), read_text(entry.path()));
  }
  std::sort(files.begin(), files.end());
  return files;
}

// The same commands twice into the same directory; the first run's bytes
// are captured before the second run replaces them.
Check determinism(const fs::path& work) {
  Check c;
  const fs::path spec = fs::path(CHIGAD_CONFIG_DIR) / "desk_synthetic.spec";
  const fs::path dir = work / "determinism";
  std::vector<std::vector<std::pair<std::string, std::string>>> runs;
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    cli::cmd_synth(spec, 7, dir);
    const auto cfg = desk_config(dir / "graph.json", "chi", 7);
    cli::cmd_train(cfg, dir / "train");
    cli::cmd_eval(cfg, dir / "train" / "model.ckpt", dir / "eval");
    runs.push_back(snapshot(dir));
  }
  const auto& a = runs[0];
  const auto& b = runs[1];
  c.require(a.size() == b.size() && !a.empty(), "artifact sets differ");
  std::size_t bytes = 0;
  for (std::size_t k = 0; c.ok && k < a.size(); ++k) {
    c.require(a[k].first == b[k].first, "file lists differ at " + a[k].first);
    c.require(a[k].second == b[k].second, "bytes differ in " + a[k].first);
    bytes += a[k].second.size();
  }
  if (c.ok) c.detail = fmt("%zu artifacts, %zu bytes identical", a.size(), bytes);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "chigad_acceptance";
  std::set<int> only;
  for (int k = 2; k < argc; ++k) only.insert(std::atoi(argv[k]));
  fs::create_directories(work);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "filter table", 5.0, filter_table},
      {2, "admissibility oracle", 5.0, admissibility},
      {3, "alignment achievability", 30.0, theorem1},
      {4, "gradient suite", 120.0, gradients},
      {5, "oracle equivalence", 60.0, oracle_equivalence},
      {6, "loss identities", 10.0, loss_identities},
      {7, "synthetic detection", 600.0, [&work] { return synthetic_detection(work); }},
      {8, "spatial locality", 5.0, locality},
      {9, "determinism", 600.0, [&work] { return determinism(work); }},
  };

  int failed = 0;
  for (const auto& crit : criteria) {
    if (!only.empty() && !only.count(crit.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = crit.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > crit.budget_s) {
      result.detail += fmt(" (over budget %.0f s)", crit.budget_s);
      result.ok = false;
    }
    failed += result.ok ? 0 : 1;
    std::printf("criterion %d %s: %s (%.1f s) %s\n", crit.id, crit.name, result.ok ? "PASS" : "FAIL", seconds, result.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
