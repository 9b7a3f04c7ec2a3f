// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Diagnostics over scored test sets: per-chunk error and confidence curves,
// monotonicity of those curves, IID/OOD comparison, difficulty bins for
// graded test sets, and annotation planning.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datascore/chunk_stats.hpp"
#include "datascore/corpus.hpp"
#include "datascore/scoring.hpp"

namespace datascore {

inline constexpr int kAnalysisChunks = 7;

// Re-chunks the scores into chunk_count chunks with rank_and_chunk and
// summarises each, hardest chunk first.
std::vector<ChunkStats> chunk_error_curve(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions,
    int chunk_count = kAnalysisChunks);

// As chunk_error_curve; throws if no prediction carries a confidence.
std::vector<ChunkStats> confidence_curve(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions,
    int chunk_count = kAnalysisChunks);

enum class ChunkField { error_rate, mean_sts, mean_conf_correct };

std::string_view to_string(ChunkField field);

// Spearman correlation between chunk index (1 = hardest) and the field,
// over chunks where the field is present. Needs at least three such chunks;
// a constant field gives 0.
double monotonicity(std::span<const ChunkStats> stats, ChunkField field);

struct TestbedBin {
  std::string label;  // B1 = highest similarity (easiest)
  double lower_edge = 0.0;
  double upper_edge = 0.0;
  std::vector<std::string> sample_ids;
  double share = 0.0;
};

// With no explicit edges, bin_count equal-width intervals over the observed
// [min, max] of mean_topb. Intervals are right-open except the topmost.
// If every mean is equal, all samples land in B1. Explicit edges must be
// strictly increasing and cover every mean.
std::vector<TestbedBin> sts_bins(std::span<const SampleScore> scores,
                                 int bin_count = kAnalysisChunks,
                                 std::optional<std::vector<double>> edges = {});

// What produced a score list; unknown fields are never reported as a
// mismatch.
struct ScoreProvenance {
  std::optional<std::string> backend;
  std::optional<std::string> train_digest;
  std::optional<double> b;
};

struct BoundaryChunk {
  int chunk_index = 0;
  double iid_mean_sts = 0.0;
  double ood_mean_sts = 0.0;
};

struct BoundaryReport {
  std::vector<BoundaryChunk> chunks;  // hardest first
  double iid_mean = 0.0;
  double ood_mean = 0.0;
  std::size_t iid_exceeds = 0;  // chunk positions with IID mean > OOD mean
  double boundary = 0.0;        // midpoint of the two overall means
};

BoundaryReport iid_ood_boundary(std::span<const SampleScore> iid_scores,
                                std::span<const SampleScore> ood_scores,
                                int chunk_count = kAnalysisChunks,
                                const ScoreProvenance& iid_provenance = {},
                                const ScoreProvenance& ood_provenance = {});

inline constexpr double kAnnotateThreshold = 0.7;
inline constexpr double kCreateThreshold = 0.5;

struct AnnotationPlan {
  double annotate_threshold = kAnnotateThreshold;
  double create_threshold = kCreateThreshold;
  std::vector<std::string> annotate_ids;  // mean_topb < annotate_threshold
  std::size_t below_create = 0;           // mean_topb < create_threshold
  std::optional<std::size_t> target_hard_count;
  std::size_t create_deficit = 0;
};

// Thresholds compare against mean_topb. When a range is given, both
// thresholds must lie inside it.
AnnotationPlan annotation_plan(std::span<const SampleScore> scores,
                               double annotate_threshold = kAnnotateThreshold,
                               double create_threshold = kCreateThreshold,
                               std::optional<std::size_t> target_hard_count = {},
                               std::optional<ValueRange> range = {});

// Spearman correlation between mean_topb and prediction confidence.
double sts_maxprob_correlation(std::span<const SampleScore> scores,
                               std::span<const PredictionRecord> predictions);

}  // namespace datascore
