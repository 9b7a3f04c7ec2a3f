// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "datascore/error.hpp"
#include "datascore/stats.hpp"

namespace datascore {

namespace {

std::vector<SampleScore> rechunk(std::span<const SampleScore> scores,
                                 int chunk_count) {
  return rank_and_chunk(std::vector<SampleScore>(scores.begin(), scores.end()),
                        chunk_count);
}

std::optional<double> field_value(const ChunkStats& st, ChunkField field) {
  if (st.size == 0) return std::nullopt;
  switch (field) {
    case ChunkField::error_rate:
      return st.error_rate;
    case ChunkField::mean_sts:
      return st.mean_sts;
    case ChunkField::mean_conf_correct:
      return st.mean_conf_correct;
  }
  return std::nullopt;
}

double mean_of(std::span<const SampleScore> scores) {
  double sum = 0.0;
  for (const auto& s : scores) sum += s.mean_topb;
  return sum / static_cast<double>(scores.size());
}

void check_same(const std::optional<std::string>& x,
                const std::optional<std::string>& y, std::string_view what) {
  if (x && y && *x != *y) {
    throw ValidationError("IID and OOD scores differ in " + std::string(what) +
                          ": '" + *x + "' vs '" + *y + "'");
  }
}

}  // namespace

std::vector<ChunkStats> chunk_error_curve(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions, int chunk_count) {
  const auto chunked = rechunk(scores, chunk_count);
  return summarize_chunks(chunked, predictions, chunk_count);
}

std::vector<ChunkStats> confidence_curve(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions, int chunk_count) {
  const bool any = std::any_of(predictions.begin(), predictions.end(),
                               [](const auto& p) { return p.confidence.has_value(); });
  if (!any) throw ValidationError("no prediction carries a confidence value");
  return chunk_error_curve(scores, predictions, chunk_count);
}

std::string_view to_string(ChunkField field) {
  switch (field) {
    case ChunkField::error_rate:
      return "error_rate";
    case ChunkField::mean_sts:
      return "mean_sts";
    case ChunkField::mean_conf_correct:
      return "mean_conf_correct";
  }
  return "unknown";
}

double monotonicity(std::span<const ChunkStats> stats, ChunkField field) {
  std::vector<double> index;
  std::vector<double> value;
  for (const auto& st : stats) {
    if (auto v = field_value(st, field)) {
      index.push_back(st.chunk_index);
      value.push_back(*v);
    }
  }
  if (index.size() < 3) {
    throw ValidationError("monotonicity of " + std::string(to_string(field)) +
                          " needs at least 3 chunks with values, got " +
                          std::to_string(index.size()));
  }
  return spearman(index, value);
}

std::vector<TestbedBin> sts_bins(std::span<const SampleScore> scores,
                                 int bin_count,
                                 std::optional<std::vector<double>> edges) {
  if (scores.empty()) throw ValidationError("no scores to bin");
  auto [lo_it, hi_it] = std::minmax_element(
      scores.begin(), scores.end(),
      [](const SampleScore& x, const SampleScore& y) { return x.mean_topb < y.mean_topb; });
  const double s_min = lo_it->mean_topb;
  const double s_max = hi_it->mean_topb;

  std::vector<double> e;
  if (edges) {
    e = std::move(*edges);
    if (e.size() < 2) throw ValidationError("bin edges need at least two values");
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (!(e[i] > e[i - 1])) {
        throw ValidationError("bin edges must be strictly increasing");
      }
    }
    if (s_min < e.front() || s_max > e.back()) {
      throw ValidationError("similarity values fall outside the bin edges");
    }
  } else {
    if (bin_count < 1) throw ValidationError("bin count must be at least 1");
    e.resize(static_cast<std::size_t>(bin_count) + 1);
    for (int j = 0; j <= bin_count; ++j) {
      e[static_cast<std::size_t>(j)] =
          s_min + (s_max - s_min) * static_cast<double>(j) / bin_count;
    }
    e.back() = s_max;
  }
  const std::size_t k = e.size() - 1;

  // Ascending interval j = [e[j], e[j+1]) is bin B(k - j).
  std::vector<TestbedBin> bins(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto& bin = bins[k - 1 - j];
    bin.label = "B" + std::to_string(k - j);
    bin.lower_edge = e[j];
    bin.upper_edge = e[j + 1];
  }
  const bool degenerate = !edges && s_max == s_min;
  for (const auto& s : scores) {
    std::size_t j = k - 1;
    if (!degenerate) {
      // First edge strictly above the value closes its interval.
      auto it = std::upper_bound(e.begin(), e.end(), s.mean_topb);
      const auto pos = static_cast<std::size_t>(it - e.begin());
      j = pos == 0 ? 0 : std::min(pos - 1, k - 1);
    }
    bins[k - 1 - j].sample_ids.push_back(s.id);
  }
  for (auto& bin : bins) {
    bin.share = static_cast<double>(bin.sample_ids.size()) /
                static_cast<double>(scores.size());
  }
  return bins;
}

BoundaryReport iid_ood_boundary(std::span<const SampleScore> iid_scores,
                                std::span<const SampleScore> ood_scores,
                                int chunk_count,
                                const ScoreProvenance& iid_provenance,
                                const ScoreProvenance& ood_provenance) {
  if (iid_scores.empty() || ood_scores.empty()) {
    throw ValidationError("boundary analysis needs both IID and OOD scores");
  }
  check_same(iid_provenance.backend, ood_provenance.backend, "backend");
  check_same(iid_provenance.train_digest, ood_provenance.train_digest,
             "train corpus");
  if (iid_provenance.b && ood_provenance.b && *iid_provenance.b != *ood_provenance.b) {
    throw ValidationError("IID and OOD scores differ in b");
  }

  const auto iid = rechunk(iid_scores, chunk_count);
  const auto ood = rechunk(ood_scores, chunk_count);
  auto chunk_means = [chunk_count](const std::vector<SampleScore>& scores) {
    std::vector<double> sum(static_cast<std::size_t>(chunk_count), 0.0);
    std::vector<std::size_t> count(sum.size(), 0);
    for (const auto& s : scores) {
      const auto slot = static_cast<std::size_t>(s.chunk_index - 1);
      sum[slot] += s.mean_topb;
      ++count[slot];
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] /= static_cast<double>(count[i]);
    return sum;
  };
  const auto iid_means = chunk_means(iid);
  const auto ood_means = chunk_means(ood);

  BoundaryReport report;
  for (int c = 1; c <= chunk_count; ++c) {
    const auto slot = static_cast<std::size_t>(c - 1);
    report.chunks.push_back({c, iid_means[slot], ood_means[slot]});
    if (iid_means[slot] > ood_means[slot]) ++report.iid_exceeds;
  }
  report.iid_mean = mean_of(iid);
  report.ood_mean = mean_of(ood);
  report.boundary = 0.5 * (report.iid_mean + report.ood_mean);
  return report;
}

AnnotationPlan annotation_plan(std::span<const SampleScore> scores,
                               double annotate_threshold,
                               double create_threshold,
                               std::optional<std::size_t> target_hard_count,
                               std::optional<ValueRange> range) {
  if (!std::isfinite(annotate_threshold) || !std::isfinite(create_threshold)) {
    throw ValidationError("thresholds must be finite");
  }
  if (create_threshold > annotate_threshold) {
    throw ValidationError("create threshold must not exceed annotate threshold");
  }
  if (range) {
    auto inside = [&](double t) { return t >= range->lo && t <= range->hi; };
    if (!inside(annotate_threshold) || !inside(create_threshold)) {
      throw ValidationError("thresholds must lie within the backend range");
    }
  }
  AnnotationPlan plan;
  plan.annotate_threshold = annotate_threshold;
  plan.create_threshold = create_threshold;
  plan.target_hard_count = target_hard_count;
  for (const auto& s : scores) {
    if (s.mean_topb < annotate_threshold) plan.annotate_ids.push_back(s.id);
    if (s.mean_topb < create_threshold) ++plan.below_create;
  }
  if (target_hard_count && *target_hard_count > plan.below_create) {
    plan.create_deficit = *target_hard_count - plan.below_create;
  }
  return plan;
}

double sts_maxprob_correlation(std::span<const SampleScore> scores,
                               std::span<const PredictionRecord> predictions) {
  const auto aligned = align_predictions(scores, predictions);
  std::vector<double> sts;
  std::vector<double> conf;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!aligned[i]->confidence) {
      throw ValidationError("missing confidence for '" + scores[i].id + "'");
    }
    sts.push_back(scores[i].mean_topb);
    conf.push_back(*aligned[i]->confidence);
  }
  return spearman(sts, conf);
}

}  // namespace datascore
