// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/score_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "datascore/error.hpp"

namespace datascore {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Reads one CSV record, joining physical lines while a quoted field is open.
// A trailing CR is dropped only at the end of the record.
bool read_record(std::istream& in, std::string& record, std::size_t& line_no) {
  if (!std::getline(in, record)) return false;
  ++line_no;
  std::string next;
  while (std::count(record.begin(), record.end(), '"') % 2 != 0 &&
         std::getline(in, next)) {
    ++line_no;
    record += '\n';
    record += next;
  }
  if (!record.empty() && record.back() == '\r') record.pop_back();
  return true;
}

// Splits one CSV record (RFC 4180 quoting).
bool split_csv(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) return false;
      cur += c;
    }
  }
  if (quoted) return false;
  fields.push_back(std::move(cur));
  return true;
}

double parse_real(const std::string& s, std::string_view where, const char* column) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw ValidationError(std::string(where) + ": bad value '" + s +
                          "' in column " + column);
  }
  return v;
}

int parse_int(const std::string& s, std::string_view where, const char* column) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
    throw ValidationError(std::string(where) + ": bad value '" + s +
                          "' in column " + column);
  }
  return v;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value + 0.0);
  return buf;
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

void write_scores_csv(std::ostream& out, std::span<const SampleScore> scores) {
  out << kScoresHeader << '\n';
  for (const auto& s : scores) {
    out << csv_field(s.id) << ',' << format_real(s.mean_topb) << ','
        << format_real(s.sum_topb) << ',' << format_optional(s.p_raw) << ','
        << format_real(s.hardness) << ',' << s.rank << ',' << s.chunk_index
        << '\n';
  }
}

std::vector<SampleScore> parse_scores_csv(std::istream& in,
                                          std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  if (!read_record(in, line, line_no)) {
    throw ValidationError(std::string(source) + ": empty scores file");
  }
  if (line != kScoresHeader) {
    throw ValidationError(std::string(source) + ":1: expected header '" +
                          std::string(kScoresHeader) + "'");
  }
  std::vector<SampleScore> scores;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  while (true) {
    const std::size_t first_line = line_no + 1;
    if (!read_record(in, line, line_no)) break;
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(first_line);
    if (!split_csv(line, fields) || fields.size() != 7) {
      throw ValidationError(where + ": expected 7 columns");
    }
    SampleScore s;
    s.id = fields[0];
    if (s.id.empty()) throw ValidationError(where + ": empty id");
    if (!seen.insert(s.id).second) {
      throw ValidationError(where + ": duplicate id '" + s.id + "'");
    }
    s.mean_topb = parse_real(fields[1], where, "mean_topb");
    s.sum_topb = parse_real(fields[2], where, "sum_topb");
    if (!fields[3].empty()) s.p_raw = parse_real(fields[3], where, "p_raw");
    s.hardness = parse_real(fields[4], where, "hardness");
    s.rank = parse_int(fields[5], where, "rank");
    s.chunk_index = parse_int(fields[6], where, "chunk");
    scores.push_back(std::move(s));
  }
  if (scores.empty()) {
    throw ValidationError(std::string(source) + ": no score rows");
  }
  return scores;
}

std::vector<SampleScore> read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  return parse_scores_csv(in, path.string());
}

void write_chunk_curve_csv(std::ostream& out, std::span<const ChunkStats> stats) {
  out << kChunkCurveHeader << '\n';
  for (const auto& st : stats) {
    out << st.chunk_index << ',' << st.size << ',' << format_real(st.mean_sts)
        << ',' << format_real(st.error_rate) << ','
        << format_optional(st.mean_conf_correct) << ','
        << format_optional(st.mean_conf_incorrect) << '\n';
  }
}

void write_wood_chunk_csv(std::ostream& out, std::span<const WoodResult> results) {
  out << kWoodChunkHeader << '\n';
  for (const auto& r : results) {
    for (const auto& st : r.per_chunk) {
      out << csv_field(r.model_name) << ',' << st.chunk_index << ',' << st.size
          << ',' << format_real(st.weight) << ',' << st.n_correct << ','
          << format_real(st.correct_rate()) << '\n';
    }
  }
}

}  // namespace datascore
