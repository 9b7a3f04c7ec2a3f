// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// WOOD score: a weighted signed accuracy,
//
//   W = sum_i E_i * w_i / sum_i w_i,
//
// with E_i the reward for a correct answer or the penalty for an incorrect
// one, and w_i either the integer chunk weight (hardest chunk heaviest) or
// the raw OOD degree p_i of the sample.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datascore/chunk_stats.hpp"
#include "datascore/corpus.hpp"
#include "datascore/scoring.hpp"

namespace datascore {

enum class WeightScheme { chunk_integer, p_raw };

std::string_view to_string(WeightScheme scheme);
// Accepts "chunk"/"chunk-integer" and "p"/"p-raw".
WeightScheme parse_weight_scheme(std::string_view name);

struct EvalConfig {
  double reward_correct = 1.0;
  double penalty_incorrect = -1.0;
  WeightScheme weight_scheme = WeightScheme::chunk_integer;

  void validate() const;
};

// chunk_count - chunk_index + 1, so chunk 1 (hardest) weighs the most.
int chunk_weight(int chunk_index, int chunk_count);

struct WoodResult {
  std::string model_name;
  double W = 0.0;
  // (W - penalty) / (reward - penalty), the weighted fraction correct.
  double W_rescaled = 0.0;
  double accuracy = 0.0;
  WeightScheme weight_scheme = WeightScheme::chunk_integer;
  int chunk_count = 0;
  std::vector<ChunkStats> per_chunk;
};

// Maps a signed score onto [0, 1]; (W + 1) / 2 under the default rewards.
double rescale(double signed_score, const EvalConfig& cfg);

// Uniform-weight instance of the WOOD formula, rescaled: plain accuracy.
double accuracy(std::span<const PredictionRecord> predictions,
                const EvalConfig& cfg = {});

// Uses the chunk assignment stored on the scores; chunk_count is the largest
// chunk index present.
WoodResult wood_score(std::span<const SampleScore> scores,
                      std::span<const PredictionRecord> predictions,
                      const EvalConfig& cfg = {}, std::string model_name = {});

struct RankingReport {
  std::vector<std::string> by_accuracy;
  std::vector<std::string> by_wood;
  std::size_t rank_changes = 0;          // models whose position differs
  std::size_t kendall_tau_distance = 0;  // discordant pairs
};

RankingReport compare_rankings(std::span<const WoodResult> results);

}  // namespace datascore
