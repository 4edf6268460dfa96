// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <fstream>
#include <sstream>

#include "chigad/model/checkpoint.hpp"
#include "chigad/spectral/chi_square.hpp"
#include "chigad/spectral/profile.hpp"
#include "json.hpp"

namespace chigad::cli {
namespace {

using nlohmann::ordered_json;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

ordered_json metrics_json(const train::MetricsRecord& m) {
  return ordered_json{{"auroc", m.auroc}, {"auprc", m.auprc}, {"f1_macro", m.f1_macro}, {"recall", m.recall}};
}

std::string metrics_csv_fields(const train::MetricsRecord& m) {
  return format_double(m.auroc) + "," + format_double(m.auprc) + "," + format_double(m.f1_macro) + "," +
         format_double(m.recall);
}

std::string curve_csv(const std::vector<train::CurvePoint>& points, const char* x, const char* y) {
  std::string s = std::string("threshold,") + x + "," + y + "\n";
  for (const auto& p : points) s += format_double(p.threshold) + "," + format_double(p.x) + "," + format_double(p.y) + "\n";
  return s;
}

std::vector<int> labels_at(const train::TrainData& data, const std::vector<Index>& nodes) {
  std::vector<int> out;
  for (Index i : nodes) out.push_back(data.labels[static_cast<std::size_t>(i)]);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + format_double(v[k]);
  return s;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

}  // namespace

hin::HeteroGraph load_graph(const std::filesystem::path& path) {
  if (path.empty()) throw Error("config does not name a graph");
  if (std::filesystem::is_directory(path)) return hin::load_hetero_graph_csv(path);
  return hin::load_hetero_graph(path);
}

void cmd_filters(const RunConfig& config, const std::filesystem::path& out) {
  ensure_dir(out);
  std::string csv = "i,s_i,mode,expectation,variance,admissibility,fit_degree,fit_error_linf,coefficients\n";
  ordered_json entries = ordered_json::array();
  for (int i : config.model.candidates) {
    const auto filter = spectral::make_chi_square_filter(i, config.model.poly_d);
    const auto moments = spectral::chi_moments(i);
    std::string admissibility = "divergent";
    ordered_json admissibility_json = "divergent";
    if (i >= 2) {
      const double a = spectral::admissibility_closed_form(i);
      admissibility = format_double(a);
      admissibility_json = a;
    }
    csv += std::to_string(i) + "," + format_double(filter.s) + "," + format_double(spectral::chi_mode(i)) + "," +
           format_double(moments.expectation) + "," + format_double(moments.variance) + "," + admissibility + "," +
           std::to_string(filter.degree()) + "," + format_double(filter.fit_error_linf) + "," +
           join_doubles(filter.poly.coefficients()) + "\n";
    entries.push_back(ordered_json{{"i", i},
                                   {"s_i", filter.s},
                                   {"mode", spectral::chi_mode(i)},
                                   {"expectation", moments.expectation},
                                   {"variance", moments.variance},
                                   {"admissibility", admissibility_json},
                                   {"fit_degree", filter.degree()},
                                   {"fit_error_linf", filter.fit_error_linf},
                                   {"coefficients", filter.poly.coefficients()}});
  }
  const ordered_json doc{{"basis", "shifted_chebyshev"}, {"poly_d", config.model.poly_d}, {"filters", entries}};
  write_text(out / "filters.csv", csv);
  write_text(out / "filters.json", doc.dump(2) + "\n");
}

void cmd_metapaths(const RunConfig& config, const std::filesystem::path& out) {
  const auto graph = load_graph(config.graph);
  std::string csv = "type,path,length,status,edges,s_high,division,representative,band_max,filter_index\n";
  ordered_json types = ordered_json::array();
  std::size_t valid_total = 0;
  for (int t = 0; t < graph.type_count(); ++t) {
    const auto bank = model::build_filter_bank(graph, t, config.model);
    const auto& type_name = graph.node_types[static_cast<std::size_t>(t)].name;
    valid_total += bank.entries.size();

    ordered_json paths = ordered_json::array();
    for (std::size_t k = 0; k < bank.entries.size(); ++k) {
      const auto& e = bank.entries[k];
      const model::RepresentativeInfo* rep = nullptr;
      for (const auto& r : bank.representatives) {
        if (r.entry == k) rep = &r;
      }
      const auto desc = e.path.describe(graph);
      // The operator carries a diagonal, so count edges on the adjacency.
      const Index undirected = hin::materialize_meta_path_graph(graph, e.path).adjacency.nonZeros() / 2;
      csv += type_name + "," + desc + "," + std::to_string(e.path.length()) + ",valid," + std::to_string(undirected) +
             "," + format_double(e.s_high) + "," + std::string(spectral::to_string(e.division)) + "," +
             (rep ? "1" : "0") + "," + (rep ? format_double(rep->band_max) : "") + "," +
             (rep ? std::to_string(rep->filter_index) : "") + "\n";
      ordered_json contributors = ordered_json::array();
      for (const auto& c : e.contributors) {
        contributors.push_back(ordered_json{{"division", spectral::to_string(c.division)}, {"index", c.index}});
      }
      paths.push_back(ordered_json{{"path", desc},
                                   {"length", e.path.length()},
                                   {"status", "valid"},
                                   {"edges", undirected},
                                   {"s_high", e.s_high},
                                   {"division", spectral::to_string(e.division)},
                                   {"representative", rep != nullptr},
                                   {"fused_degree", e.poly.degree()},
                                   {"fused_from", contributors}});
    }
    for (const auto& p : bank.excluded) {
      const auto desc = p.describe(graph);
      csv += type_name + "," + desc + "," + std::to_string(p.length()) + ",excluded: empty,0,,,0,,\n";
      paths.push_back(ordered_json{{"path", desc}, {"length", p.length()}, {"status", "excluded: empty"}});
    }
    ordered_json reps = ordered_json::array();
    for (const auto& r : bank.representatives) {
      reps.push_back(ordered_json{{"division", spectral::to_string(r.division)},
                                  {"path", bank.entries[r.entry].path.describe(graph)},
                                  {"band_max", r.band_max},
                                  {"argmax_band", r.argmax_band},
                                  {"filter_index", r.filter_index},
                                  {"subsampled", r.subsampled}});
    }
    types.push_back(ordered_json{{"type", type_name},
                                 {"degenerate", bank.degenerate},
                                 {"paths", paths},
                                 {"representatives", reps}});
  }
  if (valid_total == 0) throw Error("no valid meta-path graph in the configured length range");
  ensure_dir(out);
  write_text(out / "metapaths.csv", csv);
  write_text(out / "metapaths.json", ordered_json{{"types", types}}.dump(2) + "\n");
}

void cmd_analyze(const RunConfig& config, const std::filesystem::path& out) {
  const auto graph = load_graph(config.graph);
  std::string csv = "type,path,nodes,subsampled,argmax_band,band_max,s_high,band_energies\n";
  ordered_json graphs = ordered_json::array();
  for (int t = 0; t < graph.type_count(); ++t) {
    const auto& nt = graph.node_types[static_cast<std::size_t>(t)];
    for (const auto& path : hin::enumerate_meta_paths(graph, t, config.model.path_min, config.model.path_max)) {
      const auto mg = hin::materialize_meta_path_graph(graph, path);
      if (mg.empty()) continue;
      SparseMatrix adjacency = mg.adjacency;
      Matrix features = nt.features;
      const bool subsampled = adjacency.rows() > config.model.eigen_cap;
      if (subsampled) {
        auto s = spectral::sample_induced_subgraph(adjacency, features, config.model.eigen_cap,
                                                   model::sub_seed(config.seed, "analyze/" + path.describe(graph)));
        adjacency = std::move(s.adjacency);
        features = std::move(s.features);
      }
      const auto op = hin::laplacian(adjacency, config.model.op_kind);
      const auto p = spectral::spectral_profile(op, features, static_cast<int>(std::min<Index>(config.model.bands, op.size())),
                                                config.model.eigen_cap);
      const auto desc = path.describe(graph);
      csv += nt.name + "," + desc + "," + std::to_string(op.size()) + "," + (subsampled ? "1" : "0") + "," +
             std::to_string(p.argmax_band) + "," + format_double(p.band_max) + "," + format_double(p.s_high) + "," +
             join_doubles(p.band_energies) + "\n";
      graphs.push_back(ordered_json{{"type", nt.name},
                                    {"path", desc},
                                    {"nodes", op.size()},
                                    {"subsampled", subsampled},
                                    {"bands", p.bands},
                                    {"band_starts", p.band_starts},
                                    {"band_energies", p.band_energies},
                                    {"argmax_band", p.argmax_band},
                                    {"band_max", p.band_max},
                                    {"s_high", p.s_high},
                                    {"eigenvalues", to_std(p.eigenvalues)},
                                    {"energies", to_std(p.energies)}});
    }
  }
  ensure_dir(out);
  write_text(out / "analyze.csv", csv);
  write_text(out / "analyze.json", ordered_json{{"graphs", graphs}}.dump(2) + "\n");
}

void cmd_synth(const std::filesystem::path& spec_file, std::optional<std::uint64_t> seed,
               const std::filesystem::path& out) {
  auto spec = load_synthetic_spec(spec_file);
  if (seed) spec.seed = *seed;
  const auto graph = train::generate_synthetic_hin(spec);
  ensure_dir(out);
  hin::save_hetero_graph(graph, out / "graph.json");
}

train::TrainResult cmd_train(const RunConfig& config, const std::filesystem::path& out) {
  const auto graph = load_graph(config.graph);
  auto model = model::ChiGadModel::build(graph, config.model);
  const auto data = train::make_train_data(graph);
  const auto result = train::train(model, data, config.train);

  ensure_dir(out);
  model::save_checkpoint(out / "model.ckpt", model, config.canonical());

  std::string history = "epoch,loss,val_auroc,val_auprc,val_f1_macro,val_recall,contribution_sum,contribution_dims\n";
  for (const auto& r : result.history) {
    history += std::to_string(r.epoch) + "," + format_double(r.loss) + "," + metrics_csv_fields(r.val) + "," +
               format_double(r.contribution_sum) + "," + std::to_string(r.contribution_dims) + "\n";
  }
  write_text(out / "history.csv", history);

  const ordered_json doc{{"fingerprint", hex(model.fingerprint())},
                         {"best_epoch", result.best_epoch},
                         {"val", metrics_json(result.best_val)},
                         {"test", metrics_json(result.test)}};
  write_text(out / "metrics.json", doc.dump(2) + "\n");

  const auto scores = train::anomaly_scores(model, data.test);
  const auto labels = labels_at(data, data.test);
  write_text(out / "roc.csv", curve_csv(train::roc_curve(scores, labels), "fpr", "tpr"));
  write_text(out / "pr.csv", curve_csv(train::pr_curve(scores, labels), "recall", "precision"));
  return result;
}

train::MetricsRecord cmd_eval(const RunConfig& config, const std::filesystem::path& checkpoint,
                              const std::filesystem::path& out) {
  const auto graph = load_graph(config.graph);
  auto model = model::ChiGadModel::build(graph, config.model);
  model::load_checkpoint(checkpoint, model);
  const auto data = train::make_train_data(graph);
  const auto test = train::evaluate(model, data, hin::SplitKind::kTest, config.train.threshold);
  ensure_dir(out);
  const ordered_json doc{{"fingerprint", hex(model.fingerprint())}, {"test", metrics_json(test)}};
  write_text(out / "eval.json", doc.dump(2) + "\n");
  return test;
}

}  // namespace chigad::cli
