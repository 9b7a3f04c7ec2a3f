// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ingestion of corpora, prediction files and embedding tables.
//
// Corpus and prediction files are line-delimited JSON, one object per line.
// Embedding files are a strict text format:
//
//   #dim <d>
//   <id>\t<f1> <f2> ... <fd>
//
// Lines starting with "# " are comments (e.g. "# encoder <name>") and are
// skipped wherever they appear. Any other deviation is a parse error.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace datascore {

enum class Role { train, test };

std::string_view to_string(Role role);

struct Sample {
  std::string id;
  std::string text;
  std::optional<std::string> label;
  // Original record line as read from disk; empty for samples built in code.
  // Exports write it back verbatim so extra fields survive.
  std::string source_record;

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.id == b.id && a.text == b.text && a.label == b.label;
  }
};

// Ordered, validated collection of samples. Immutable after construction.
class Corpus {
 public:
  // Throws ValidationError on an empty sample list, duplicate or empty ids,
  // or blank text.
  Corpus(Role role, std::vector<Sample> samples);

  Role role() const { return role_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const Sample> samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  const Sample* find(std::string_view id) const;
  std::vector<std::string> ids() const;

 private:
  Role role_;
  std::vector<Sample> samples_;
  std::unordered_map<std::string, std::size_t> index_;
};

Corpus load_corpus(const std::filesystem::path& path, Role role);
Corpus parse_corpus(std::istream& in, Role role, std::string_view source_name);

// One JSON object per sample, in corpus order.
void write_corpus(std::ostream& out, std::span<const Sample> samples);
std::string sample_to_record(const Sample& sample);

struct PredictionRecord {
  std::string id;
  bool correct = false;
  std::optional<double> confidence;
};

// Correctness is resolved per record as: explicit "correct" flag, else
// "prediction" compared against the record's "gold", else against the gold
// label looked up by id. The result is ordered like expected_ids and covers
// it exactly, or the call throws.
std::vector<PredictionRecord> load_predictions(
    const std::filesystem::path& path, std::span<const std::string> expected_ids,
    const std::unordered_map<std::string, std::string>& gold_labels = {});

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path,
                                               const Corpus& test);

std::vector<PredictionRecord> parse_predictions(
    std::istream& in, std::string_view source_name,
    std::span<const std::string> expected_ids,
    const std::unordered_map<std::string, std::string>& gold_labels);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  // Throws ValidationError on a wrong length, non-finite component, or an id
  // that is already present.
  void add(std::string id, std::span<const double> values);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool contains(std::string_view id) const;
  std::optional<std::span<const double>> find(std::string_view id) const;
  std::span<const std::string> ids() const { return ids_; }

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable parse_embeddings(std::istream& in, std::string_view source_name);

}  // namespace datascore
