// SPDX-License-Identifier: Apache-2.0

#include "chigad/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chigad::model {
namespace {

constexpr const char* kFormat = "chigad-checkpoint";
constexpr int kVersion = 1;

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
  return out;
}

struct Parsed {
  CheckpointInfo info;
  nlohmann::json params;
  std::string payload;
};

Parsed parse(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw Error("checkpoint " + path.string() + " is empty");
  Parsed p;
  try {
    const auto j = nlohmann::json::parse(header);
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kVersion) {
      throw Error("checkpoint " + path.string() + " has an unsupported format");
    }
    p.info.fingerprint = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
    p.info.config_text = j.at("config").get<std::string>();
    p.info.scalar_count = j.at("scalar_count").get<Index>();
    p.params = j.at("params");
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed checkpoint header: " + std::string(e.what()));
  }
  std::ostringstream rest;
  rest << in.rdbuf();
  p.payload = rest.str();
  return p;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Model& model, const std::string& config_text) {
  const auto& params = model.parameters();
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["fingerprint"] = hex64(model.fingerprint());
  j["config"] = config_text;
  j["scalar_count"] = params.scalar_count();
  auto list = nlohmann::json::array();
  for (const auto& p : params) list.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}});
  j["params"] = list;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
  const Vector flat = params.flatten();
  for (Index k = 0; k < flat.size(); ++k) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(flat(k)));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

CheckpointInfo read_checkpoint_info(const std::filesystem::path& path) { return parse(path).info; }

CheckpointInfo load_checkpoint(const std::filesystem::path& path, Model& model) {
  const Parsed p = parse(path);
  if (p.info.fingerprint != model.fingerprint()) {
    throw Error("checkpoint schema hash mismatch: file " + hex64(p.info.fingerprint) + ", model " +
                hex64(model.fingerprint()));
  }
  auto& params = model.parameters();
  if (p.params.size() != params.size() || p.info.scalar_count != params.scalar_count()) {
    throw Error("checkpoint parameter layout does not match the model");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& e = p.params[k];
    if (e.at("name").get<std::string>() != params[k].name || e.at("rows").get<Index>() != params[k].value.rows() ||
        e.at("cols").get<Index>() != params[k].value.cols()) {
      throw Error("checkpoint parameter '" + params[k].name + "' does not match the model");
    }
  }
  if (p.payload.size() != static_cast<std::size_t>(p.info.scalar_count) * 8) {
    throw Error("checkpoint payload is truncated or oversized");
  }
  Vector flat(p.info.scalar_count);
  for (Index k = 0; k < flat.size(); ++k) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, p.payload.data() + 8 * k, 8);
    flat(k) = std::bit_cast<double>(to_little(bits));
  }
  params.assign(flat);
  return p.info;
}

}  // namespace chigad::model
