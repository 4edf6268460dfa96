// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chigad::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error("config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  // from_chars for double is missing on older libstdc++; strtod is fine for config text.
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw Error("config key '" + key + "': cannot parse '" + text + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = parse_number<int>(key, std::string(trim(std::string_view(item).substr(0, dash))));
      const int hi = parse_number<int>(key, std::string(trim(std::string_view(item).substr(dash + 1))));
      if (hi < lo) throw Error("config key '" + key + "': empty range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<int>(key, item));
    }
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second) throw Error("config key '" + key + "' appears twice");
  }
  return out;
}

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig c;
  // Defaults: wide four-layer head, slow learning rate.
  c.model.aligned_dim = 512;
  c.model.hidden_dim = 512;
  c.model.mlp_layers = 4;
  c.train.learning_rate = 1e-4;
  c.train.epochs = 200;
  c.train.loss = {2.2, 1.9};

  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "graph") {
      c.graph = value;
      if (c.graph.is_relative() && !base_dir.empty()) c.graph = base_dir / c.graph;
    } else if (key == "candidates") {
      c.model.candidates = parse_int_list(key, value);
    } else if (key == "meta_filters") {
      c.model.meta_filters = parse_int_list(key, value);
    } else if (key == "bands") {
      c.model.bands = parse_number<int>(key, value);
    } else if (key == "w_d") {
      c.model.w_d = parse_real(key, value);
    } else if (key == "poly_d") {
      c.model.poly_d = parse_number<int>(key, value);
    } else if (key == "d_a") {
      c.model.aligned_dim = parse_number<Index>(key, value);
    } else if (key == "hidden") {
      c.model.hidden_dim = parse_number<Index>(key, value);
    } else if (key == "path_min") {
      c.model.path_min = parse_number<int>(key, value);
    } else if (key == "path_max") {
      c.model.path_max = parse_number<int>(key, value);
    } else if (key == "lr") {
      c.train.learning_rate = parse_real(key, value);
    } else if (key == "epochs") {
      c.train.epochs = parse_number<int>(key, value);
    } else if (key == "H") {
      c.train.loss.high = parse_real(key, value);
    } else if (key == "L") {
      c.train.loss.low = parse_real(key, value);
    } else if (key == "activation") {
      c.model.activation = model::parse_activation(value);
    } else if (key == "mlp_layers") {
      c.model.mlp_layers = parse_number<int>(key, value);
    } else if (key == "seed") {
      c.set_seed(parse_number<std::uint64_t>(key, value));
    } else if (key == "operator") {
      c.model.op_kind = hin::parse_operator_kind(value);
    } else if (key == "eigen_cap") {
      c.model.eigen_cap = parse_number<Index>(key, value);
    } else if (key == "max_filter_degree") {
      c.model.max_filter_degree = parse_number<int>(key, value);
    } else if (key == "filter_mode") {
      c.model.filter_mode = model::parse_filter_mode(value);
    } else if (key == "threshold") {
      c.train.threshold = parse_real(key, value);
    } else {
      throw Error("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.parent_path());
}

void RunConfig::set_seed(std::uint64_t value) {
  seed = value;
  model.seed = value;
}

void RunConfig::validate() const {
  model.validate();
  train.loss.validate();
  if (!(train.learning_rate >= 0.0)) throw Error("config: lr must be >= 0");
  if (train.epochs < 1) throw Error("config: epochs must be >= 1");
  if (!(train.threshold > 0.0 && train.threshold < 1.0)) throw Error("config: threshold must lie in (0, 1)");
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "candidates = " << join(model.candidates) << '\n'
     << "meta_filters = " << join(model.meta_filters) << '\n'
     << "bands = " << model.bands << '\n'
     << "w_d = " << format_double(model.w_d) << '\n'
     << "poly_d = " << model.poly_d << '\n'
     << "d_a = " << model.aligned_dim << '\n'
     << "hidden = " << model.hidden_dim << '\n'
     << "path_min = " << model.path_min << '\n'
     << "path_max = " << model.path_max << '\n'
     << "lr = " << format_double(train.learning_rate) << '\n'
     << "epochs = " << train.epochs << '\n'
     << "H = " << format_double(train.loss.high) << '\n'
     << "L = " << format_double(train.loss.low) << '\n'
     << "activation = " << model::to_string(model.activation) << '\n'
     << "mlp_layers = " << model.mlp_layers << '\n'
     << "seed = " << seed << '\n'
     << "operator = " << hin::to_string(model.op_kind) << '\n'
     << "eigen_cap = " << model.eigen_cap << '\n'
     << "max_filter_degree = " << model.max_filter_degree << '\n'
     << "filter_mode = " << model::to_string(model.filter_mode) << '\n'
     << "threshold = " << format_double(train.threshold) << '\n';
  return os.str();
}

train::SyntheticSpec parse_synthetic_spec(std::string_view text) {
  train::SyntheticSpec s = train::default_synthetic_spec();
  const auto kv = parse_key_values(text);
  // Types first so relation endpoints can be resolved by name.
  if (const auto it = kv.find("types"); it != kv.end()) {
    s.types.clear();
    for (const auto& item : split(it->second, ',')) {
      const auto f = split(item, ':');
      if (f.size() != 3) throw Error("synthetic spec: type entry '" + item + "' must be name:count:feature_dim");
      s.types.push_back({f[0], parse_number<Index>("types", f[1]), parse_number<Index>("types", f[2])});
    }
  }
  auto type_id = [&s](const std::string& name) {
    for (std::size_t t = 0; t < s.types.size(); ++t) {
      if (s.types[t].name == name) return static_cast<int>(t);
    }
    throw Error("synthetic spec: unknown type '" + name + "'");
  };
  bool target_set = false;
  for (const auto& [key, value] : kv) {
    if (key == "types") continue;
    if (key == "relations") {
      s.relations.clear();
      if (value.empty()) continue;
      for (const auto& item : split(value, ',')) {
        const auto f = split(item, ':');
        if (f.size() != 4 && f.size() != 5) {
          throw Error("synthetic spec: relation entry '" + item + "' must be name:src:dst:avg_degree[:reverse_name]");
        }
        s.relations.push_back({f[0], type_id(f[1]), type_id(f[2]), parse_real("relations", f[3]), f.size() == 5 ? f[4] : ""});
      }
    } else if (key == "target") {
      s.target = type_id(value);
      target_set = true;
    } else if (key == "anomaly_rate") {
      s.anomaly_rate = parse_real(key, value);
    } else if (key == "feature_shift") {
      s.feature_shift = parse_real(key, value);
    } else if (key == "rewire_prob") {
      s.rewire_prob = parse_real(key, value);
    } else if (key == "clusters") {
      s.clusters = parse_number<int>(key, value);
    } else if (key == "homophily") {
      s.homophily = parse_real(key, value);
    } else if (key == "noise") {
      s.noise = parse_real(key, value);
    } else if (key == "train_fraction") {
      s.train_fraction = parse_real(key, value);
    } else if (key == "val_fraction") {
      s.val_fraction = parse_real(key, value);
    } else if (key == "seed") {
      s.seed = parse_number<std::uint64_t>(key, value);
    } else {
      throw Error("unknown synthetic spec key '" + key + "'");
    }
  }
  if (!target_set && s.target >= static_cast<int>(s.types.size())) s.target = 0;
  s.validate();
  return s;
}

train::SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  return parse_synthetic_spec(read_file(path));
}

std::string canonical(const train::SyntheticSpec& s) {
  std::ostringstream os;
  os << "types = ";
  for (std::size_t t = 0; t < s.types.size(); ++t) {
    os << (t ? ", " : "") << s.types[t].name << ':' << s.types[t].count << ':' << s.types[t].feature_dim;
  }
  os << "\nrelations = ";
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    const auto& rel = s.relations[r];
    os << (r ? ", " : "") << rel.name << ':' << s.types[static_cast<std::size_t>(rel.src)].name << ':'
       << s.types[static_cast<std::size_t>(rel.dst)].name << ':' << format_double(rel.avg_degree);
    if (!rel.reverse_name.empty()) os << ':' << rel.reverse_name;
  }
  os << "\ntarget = " << s.types[static_cast<std::size_t>(s.target)].name << '\n'
     << "anomaly_rate = " << format_double(s.anomaly_rate) << '\n'
     << "feature_shift = " << format_double(s.feature_shift) << '\n'
     << "rewire_prob = " << format_double(s.rewire_prob) << '\n'
     << "clusters = " << s.clusters << '\n'
     << "homophily = " << format_double(s.homophily) << '\n'
     << "noise = " << format_double(s.noise) << '\n'
     << "train_fraction = " << format_double(s.train_fraction) << '\n'
     << "val_fraction = " << format_double(s.val_fraction) << '\n'
     << "seed = " << s.seed << '\n';
  return os.str();
}

}  // namespace chigad::cli
