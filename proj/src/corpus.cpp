// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/corpus.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "datascore/error.hpp"

namespace datascore {

using json = nlohmann::json;

namespace {

std::string location(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

bool is_blank(std::string_view s) {
  for (unsigned char c : s) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '\f' &&
        c != '\v') {
      return false;
    }
  }
  return true;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(path.string() + ": cannot open file");
  }
  return in;
}

json parse_record(const std::string& line, std::string_view source,
                  std::size_t line_no) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(location(source, line_no) +
                          ": malformed record at line " +
                          std::to_string(line_no) + ": " + e.what());
  }
  if (!record.is_object()) {
    throw ValidationError(location(source, line_no) +
                          ": malformed record at line " +
                          std::to_string(line_no) + ": expected an object");
  }
  return record;
}

std::optional<std::string> optional_string(const json& record,
                                           const char* key,
                                           std::string_view source,
                                           std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    return std::nullopt;
  }
  if (!it->is_string()) {
    throw ValidationError(location(source, line_no) + ": field '" + key +
                          "' must be a string at line " +
                          std::to_string(line_no));
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Role role) {
  return role == Role::train ? "train" : "test";
}

Corpus::Corpus(Role role, std::vector<Sample> samples)
    : role_(role), samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw ValidationError("empty corpus");
  }
  index_.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.id.empty()) {
      throw ValidationError("empty id at position " + std::to_string(i + 1));
    }
    if (is_blank(s.text)) {
      throw ValidationError("empty text for '" + s.id + "'");
    }
    if (!index_.emplace(s.id, i).second) {
      throw ValidationError("duplicate id '" + s.id + "' at position " +
                            std::to_string(i + 1));
    }
  }
}

const Sample* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &samples_[it->second];
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(samples_.size());
  for (const Sample& s : samples_) out.push_back(s.id);
  return out;
}

Corpus parse_corpus(std::istream& in, Role role, std::string_view source) {
  std::vector<Sample> samples;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json record = parse_record(line, source, line_no);

    auto id = optional_string(record, "id", source, line_no);
    if (!id || id->empty()) {
      throw ValidationError(location(source, line_no) +
                            ": missing or empty id at line " +
                            std::to_string(line_no));
    }
    auto text = optional_string(record, "text", source, line_no);
    if (!text || is_blank(*text)) {
      throw ValidationError(location(source, line_no) +
                            ": empty text for '" + *id + "' at line " +
                            std::to_string(line_no));
    }
    if (!seen.insert(*id).second) {
      throw ValidationError(location(source, line_no) + ": duplicate id '" +
                            *id + "' at line " + std::to_string(line_no));
    }
    Sample sample;
    sample.id = std::move(*id);
    sample.text = std::move(*text);
    sample.label = optional_string(record, "label", source, line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    sample.source_record = line;
    samples.push_back(std::move(sample));
  }
  if (samples.empty()) {
    throw ValidationError(std::string(source) + ": empty corpus");
  }
  return Corpus(role, std::move(samples));
}

Corpus load_corpus(const std::filesystem::path& path, Role role) {
  auto in = open_input(path);
  return parse_corpus(in, role, path.string());
}

std::string sample_to_record(const Sample& sample) {
  if (!sample.source_record.empty()) return sample.source_record;
  // Keys in a fixed order so exports are reproducible.
  std::string out = "{\"id\":" + json(sample.id).dump() +
                    ",\"text\":" + json(sample.text).dump();
  if (sample.label) out += ",\"label\":" + json(*sample.label).dump();
  out += "}";
  return out;
}

void write_corpus(std::ostream& out, std::span<const Sample> samples) {
  for (const Sample& s : samples) {
    out << sample_to_record(s) << '\n';
  }
}

std::vector<PredictionRecord> parse_predictions(
    std::istream& in, std::string_view source,
    std::span<const std::string> expected_ids,
    const std::unordered_map<std::string, std::string>& gold_labels) {
  std::unordered_map<std::string, std::size_t> slot;
  slot.reserve(expected_ids.size());
  for (std::size_t i = 0; i < expected_ids.size(); ++i) {
    slot.emplace(expected_ids[i], i);
  }
  std::vector<std::optional<PredictionRecord>> by_slot(expected_ids.size());

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json record = parse_record(line, source, line_no);
    const std::string where = location(source, line_no);

    auto id = optional_string(record, "id", source, line_no);
    if (!id || id->empty()) {
      throw ValidationError(where + ": missing or empty id at line " +
                            std::to_string(line_no));
    }
    auto it = slot.find(*id);
    if (it == slot.end()) {
      throw ValidationError(where + ": prediction for unknown id '" + *id +
                            "' at line " + std::to_string(line_no));
    }
    if (by_slot[it->second]) {
      throw ValidationError(where + ": duplicate prediction for '" + *id +
                            "' at line " + std::to_string(line_no));
    }

    PredictionRecord rec;
    rec.id = *id;
    auto correct = record.find("correct");
    if (correct != record.end() && !correct->is_null()) {
      if (!correct->is_boolean()) {
        throw ValidationError(where + ": field 'correct' must be a boolean");
      }
      rec.correct = correct->get<bool>();
    } else {
      auto prediction = optional_string(record, "prediction", source, line_no);
      std::optional<std::string> gold =
          optional_string(record, "gold", source, line_no);
      if (!gold) {
        auto g = gold_labels.find(*id);
        if (g != gold_labels.end()) gold = g->second;
      }
      if (!prediction || !gold) {
        throw ValidationError(where + ": cannot derive correctness for '" +
                              *id + "' at line " + std::to_string(line_no) +
                              " (need 'correct', or 'prediction' with a gold"
                              " label)");
      }
      rec.correct = (*prediction == *gold);
    }

    auto conf = record.find("confidence");
    if (conf != record.end() && !conf->is_null()) {
      if (!conf->is_number()) {
        throw ValidationError(where + ": field 'confidence' must be a number");
      }
      double c = conf->get<double>();
      if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
        throw ValidationError(where + ": confidence for '" + *id +
                              "' outside [0,1]");
      }
      rec.confidence = c;
    }
    by_slot[it->second] = std::move(rec);
  }

  std::vector<PredictionRecord> out;
  out.reserve(by_slot.size());
  for (std::size_t i = 0; i < by_slot.size(); ++i) {
    if (!by_slot[i]) {
      throw ValidationError(std::string(source) + ": missing prediction for '" +
                            expected_ids[i] + "'");
    }
    out.push_back(std::move(*by_slot[i]));
  }
  return out;
}

std::vector<PredictionRecord> load_predictions(
    const std::filesystem::path& path, std::span<const std::string> expected_ids,
    const std::unordered_map<std::string, std::string>& gold_labels) {
  auto in = open_input(path);
  return parse_predictions(in, path.string(), expected_ids, gold_labels);
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path,
                                               const Corpus& test) {
  std::unordered_map<std::string, std::string> gold;
  for (const Sample& s : test.samples()) {
    if (s.label) gold.emplace(s.id, *s.label);
  }
  const auto ids = test.ids();
  return load_predictions(path, ids, gold);
}

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ValidationError("embedding dim must be positive");
}

void EmbeddingTable::add(std::string id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw ValidationError("embedding '" + id + "' has " +
                          std::to_string(values.size()) +
                          " values, expected " + std::to_string(dim_));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ValidationError("embedding '" + id + "' has a non-finite value");
    }
  }
  if (index_.count(id) != 0) {
    throw ValidationError("duplicate embedding id '" + id + "'");
  }
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), values.begin(), values.end());
}

bool EmbeddingTable::contains(std::string_view id) const {
  return index_.count(std::string(id)) != 0;
}

std::optional<std::span<const double>> EmbeddingTable::find(
    std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(values_).subspan(it->second * dim_, dim_);
}

namespace {

bool parse_decimal_size(std::string_view s, std::size_t& out) {
  if (s.empty() || (s.size() > 1 && s.front() == '0')) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_comment(std::string_view line) {
  return line.size() >= 2 && line[0] == '#' && line[1] == ' ';
}

}  // namespace

EmbeddingTable parse_embeddings(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<EmbeddingTable> table;
  std::vector<double> values;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = location(source, line_no);
    if (is_comment(line)) continue;

    if (!table) {
      constexpr std::string_view kHeader = "#dim ";
      std::size_t dim = 0;
      if (line.rfind(kHeader, 0) != 0 ||
          !parse_decimal_size(std::string_view(line).substr(kHeader.size()),
                              dim) ||
          dim == 0) {
        throw ValidationError(where + ": expected header '#dim <d>' at line " +
                              std::to_string(line_no));
      }
      table.emplace(dim);
      continue;
    }

    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ValidationError(where + ": expected '<id>\\t<values>' at line " +
                            std::to_string(line_no));
    }
    std::string id = line.substr(0, tab);
    std::string_view rest = std::string_view(line).substr(tab + 1);
    values.clear();
    while (true) {
      const auto space = rest.find(' ');
      std::string_view token = rest.substr(0, space);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(),
                                       v, std::chars_format::general);
      if (token.empty() || ec != std::errc() ||
          ptr != token.data() + token.size()) {
        throw ValidationError(where + ": bad number '" + std::string(token) +
                              "' for '" + id + "' at line " +
                              std::to_string(line_no));
      }
      if (!std::isfinite(v)) {
        throw ValidationError(where + ": non-finite value for '" + id +
                              "' at line " + std::to_string(line_no));
      }
      values.push_back(v);
      if (space == std::string_view::npos) break;
      rest.remove_prefix(space + 1);
    }
    if (values.size() != table->dim()) {
      throw ValidationError(where + ": row '" + id + "' has " +
                            std::to_string(values.size()) +
                            " values, expected " +
                            std::to_string(table->dim()) + " at line " +
                            std::to_string(line_no));
    }
    if (table->contains(id)) {
      throw ValidationError(where + ": duplicate embedding id '" + id +
                            "' at line " + std::to_string(line_no));
    }
    table->add(std::move(id), values);
  }
  if (!table) {
    throw ValidationError(std::string(source) + ": missing '#dim <d>' header");
  }
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_embeddings(in, path.string());
}

}  // namespace datascore
