// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Run manifests. Every output file <out> gets a sidecar <out>.manifest.json
// holding the manifest, its digest, and the output's own SHA-256. JSON
// reports also embed the digest directly.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace datascore {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<InputDigest> inputs;
  std::optional<std::string> backend;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<int> chunk_count;
  std::optional<std::string> normalization;
  std::map<std::string, std::string> options;
  std::string tool_version = std::string(kToolVersion);

  void add_input(std::string role, const std::filesystem::path& path);
  const InputDigest* input(std::string_view role) const;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  // SHA-256 of the compact, key-sorted JSON form.
  std::string digest() const;
};

std::filesystem::path manifest_path_for(const std::filesystem::path& output);
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& output);
// nullopt when no sidecar exists; throws ValidationError if it is unreadable.
std::optional<RunManifest> read_manifest_for(const std::filesystem::path& output);

}  // namespace datascore
