// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Text formats shared between subcommands.
//
// Scores CSV (rows in rank order):
//   id,mean_topb,sum_topb,p_raw,hardness,rank,chunk
// Reals are printed with 10 significant digits ("%.10g"); p_raw is empty
// when absent. Ids containing a comma, quote or line break are quoted.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datascore/chunk_stats.hpp"
#include "datascore/scoring.hpp"
#include "datascore/wood.hpp"

namespace datascore {

inline constexpr std::string_view kScoresHeader =
    "id,mean_topb,sum_topb,p_raw,hardness,rank,chunk";
inline constexpr std::string_view kChunkCurveHeader =
    "chunk,size,mean_sts,error_rate,mean_conf_correct,mean_conf_incorrect";
inline constexpr std::string_view kWoodChunkHeader =
    "model,chunk,size,weight,n_correct,rate";

// "%.10g", with -0 printed as 0.
std::string format_real(double value);
std::string format_optional(const std::optional<double>& value);

void write_scores_csv(std::ostream& out, std::span<const SampleScore> scores);
std::vector<SampleScore> parse_scores_csv(std::istream& in,
                                          std::string_view source_name);
std::vector<SampleScore> read_scores_csv(const std::filesystem::path& path);

void write_chunk_curve_csv(std::ostream& out, std::span<const ChunkStats> stats);
void write_wood_chunk_csv(std::ostream& out, std::span<const WoodResult> results);

}  // namespace datascore
