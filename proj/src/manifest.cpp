// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "datascore/error.hpp"

namespace datascore {

using json = nlohmann::json;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256: init failed");
    }
  }

  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_.get(), data, size) != 1) {
      throw std::runtime_error("sha256: update failed");
    }
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw std::runtime_error("sha256: final failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[md[i] >> 4];
      out += kHex[md[i] & 0xf];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

void RunManifest::add_input(std::string role, const std::filesystem::path& path) {
  inputs.push_back({std::move(role), path.string(), sha256_file(path)});
}

const InputDigest* RunManifest::input(std::string_view role) const {
  for (const auto& in : inputs) {
    if (in.role == role) return &in;
  }
  return nullptr;
}

json RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["inputs"] = json::array();
  for (const auto& in : inputs) {
    j["inputs"].push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  }
  put_optional(j, "backend", backend);
  put_optional(j, "a", a);
  put_optional(j, "b", b);
  put_optional(j, "chunk_count", chunk_count);
  put_optional(j, "normalization", normalization);
  if (!options.empty()) j["options"] = options;
  j["tool_version"] = tool_version;
  return j;
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  for (const auto& in : j.at("inputs")) {
    m.inputs.push_back({in.at("role").get<std::string>(),
                        in.at("path").get<std::string>(),
                        in.at("sha256").get<std::string>()});
  }
  m.backend = get_optional<std::string>(j, "backend");
  m.a = get_optional<double>(j, "a");
  m.b = get_optional<double>(j, "b");
  m.chunk_count = get_optional<int>(j, "chunk_count");
  m.normalization = get_optional<std::string>(j, "normalization");
  if (auto it = j.find("options"); it != j.end()) {
    m.options = it->get<std::map<std::string, std::string>>();
  }
  m.tool_version = j.at("tool_version").get<std::string>();
  return m;
}

std::string RunManifest::digest() const { return sha256_hex(to_json().dump()); }

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& output) {
  json doc;
  doc["digest"] = manifest.digest();
  doc["manifest"] = manifest.to_json();
  doc["output"] = output.filename().string();
  doc["output_sha256"] = sha256_file(output);
  std::ofstream out(manifest_path_for(output), std::ios::binary);
  if (!out) {
    throw ValidationError(manifest_path_for(output).string() +
                          ": cannot write manifest");
  }
  out << doc.dump(2) << '\n';
}

std::optional<RunManifest> read_manifest_for(const std::filesystem::path& output) {
  const auto path = manifest_path_for(output);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return RunManifest::from_json(json::parse(in).at("manifest"));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": unreadable manifest: " + e.what());
  }
}

}  // namespace datascore
