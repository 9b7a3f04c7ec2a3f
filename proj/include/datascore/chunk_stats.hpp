// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "datascore/corpus.hpp"
#include "datascore/scoring.hpp"

namespace datascore {

struct ChunkStats {
  int chunk_index = 0;
  std::size_t size = 0;
  double weight = 0.0;
  std::size_t n_correct = 0;
  double mean_sts = 0.0;  // mean of mean_topb over the chunk
  double error_rate = 0.0;
  // Present only when the chunk has members of that class and every one of
  // them carries a confidence.
  std::optional<double> mean_conf_correct;
  std::optional<double> mean_conf_incorrect;

  double correct_rate() const {
    return size == 0 ? 0.0
                     : static_cast<double>(n_correct) / static_cast<double>(size);
  }
};

// Pairs every score with its prediction by id. Throws ValidationError unless
// the two id sets are identical.
std::vector<const PredictionRecord*> align_predictions(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions);

// Per-chunk statistics using the chunk_index already stored on each score.
// Weights follow the integer chunk scheme. Ordered chunk 1 (hardest) first.
std::vector<ChunkStats> summarize_chunks(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions, int chunk_count);

}  // namespace datascore
