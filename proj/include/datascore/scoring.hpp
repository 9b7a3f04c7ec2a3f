// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-sample hardness from top-b train similarity.
//
// For a test sample with top-b similarity sum S_b, the raw OOD degree is
// p = a / S_b (absent when S_b <= 0). Hardness in [0, 1] is a monotone
// decreasing map of mean_topb; ranks and chunks come from sorting by
// mean_topb descending (ties by id ascending).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datascore/corpus.hpp"
#include "datascore/similarity.hpp"

namespace datascore {

enum class Normalization { minmax, affine, rank };

std::string_view to_string(Normalization mode);
Normalization parse_normalization(std::string_view name);

struct ScoringConfig {
  double a = 1.0;
  double b = 0.1;
  int chunk_count = 3;
  Normalization normalization = Normalization::minmax;

  void validate() const;
};

struct SampleScore {
  std::string id;
  double mean_topb = 0.0;
  double sum_topb = 0.0;
  std::optional<double> p_raw;
  double hardness = 0.0;
  int rank = 0;         // 1 = highest mean_topb (easiest)
  int chunk_index = 0;  // 1 = lowest-similarity (hardest) chunk
};

// Scores in rank order.
std::vector<SampleScore> score_samples(const Corpus& train, const Corpus& test,
                                       const SimilarityBackend& backend,
                                       const ScoringConfig& cfg,
                                       std::optional<std::size_t> threads = {});

// Same, over precomputed rows (row i belongs to test[i]).
std::vector<SampleScore> score_rows(const SimilarityRows& rows,
                                    const Corpus& test, ValueRange range,
                                    const ScoringConfig& cfg);

// Sizes of chunks 1..count for n items. The n % count leftover items go one
// each to the hardest chunks.
std::vector<std::size_t> chunk_sizes(std::size_t n, int count);

// Sorts by mean_topb descending (id ascending on ties) and fills rank and
// chunk_index.
std::vector<SampleScore> rank_and_chunk(std::vector<SampleScore> scores,
                                        int chunk_count);

// Fills hardness. minmax and rank use only the scored set; affine maps the
// backend's declared range onto [0, 1]. All-equal means give 0.5 under
// minmax and rank.
void normalize_hardness(std::span<SampleScore> scores, Normalization mode,
                        ValueRange range);

struct SweepEntry {
  double b = 0.0;
  std::vector<SampleScore> scores;
};

// Similarity rows are computed once and reused for every fraction.
std::vector<SweepEntry> sweep_b(
    const Corpus& train, const Corpus& test, const SimilarityBackend& backend,
    double a, std::span<const double> b_values = kDefaultSweep,
    int chunk_count = 3, Normalization normalization = Normalization::minmax,
    std::optional<std::size_t> threads = {});

std::size_t count_absent_p_raw(std::span<const SampleScore> scores);

}  // namespace datascore
