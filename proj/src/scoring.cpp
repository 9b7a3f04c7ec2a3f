// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "datascore/error.hpp"
#include "datascore/stats.hpp"

namespace datascore {

namespace {

SampleScore from_stats(const TopBStats& stats, double a) {
  SampleScore s;
  s.id = stats.test_id;
  s.mean_topb = stats.mean_topb;
  s.sum_topb = stats.sum_topb;
  if (stats.sum_topb > 0.0) s.p_raw = a / stats.sum_topb;
  return s;
}

std::vector<SampleScore> finish(std::vector<SampleScore> scores,
                                const ScoringConfig& cfg, ValueRange range) {
  normalize_hardness(scores, cfg.normalization, range);
  return rank_and_chunk(std::move(scores), cfg.chunk_count);
}

}  // namespace

std::string_view to_string(Normalization mode) {
  switch (mode) {
    case Normalization::minmax:
      return "minmax";
    case Normalization::affine:
      return "affine";
    case Normalization::rank:
      return "rank";
  }
  return "unknown";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "minmax") return Normalization::minmax;
  if (name == "affine") return Normalization::affine;
  if (name == "rank") return Normalization::rank;
  throw ValidationError("unknown normalization '" + std::string(name) + "'");
}

void ScoringConfig::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("a must be a positive finite number");
  }
  if (!(b > 0.0 && b <= 1.0)) throw ValidationError("b must lie in (0, 1]");
  if (chunk_count < 1) throw ValidationError("chunk count must be at least 1");
}

std::vector<SampleScore> score_rows(const SimilarityRows& rows,
                                    const Corpus& test, ValueRange range,
                                    const ScoringConfig& cfg) {
  cfg.validate();
  if (rows.n_test() != test.size()) {
    throw ValidationError("similarity rows do not match the test corpus");
  }
  std::vector<SampleScore> scores;
  scores.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    scores.push_back(from_stats(top_b_stats(rows.row(i), cfg.b, test[i].id), cfg.a));
  }
  return finish(std::move(scores), cfg, range);
}

std::vector<SampleScore> score_samples(const Corpus& train, const Corpus& test,
                                       const SimilarityBackend& backend,
                                       const ScoringConfig& cfg,
                                       std::optional<std::size_t> threads) {
  cfg.validate();
  if (static_cast<std::size_t>(cfg.chunk_count) > test.size()) {
    throw ValidationError("chunk count exceeds the number of test samples");
  }
  const auto rows = compute_rows(backend, train, test, threads);
  return score_rows(rows, test, backend.range(), cfg);
}

std::vector<std::size_t> chunk_sizes(std::size_t n, int count) {
  if (count < 1) throw ValidationError("chunk count must be at least 1");
  const auto c = static_cast<std::size_t>(count);
  if (c > n) {
    throw ValidationError("chunk count " + std::to_string(count) +
                          " exceeds the number of samples (" +
                          std::to_string(n) + ")");
  }
  std::vector<std::size_t> sizes(c, n / c);
  for (std::size_t i = 0; i < n % c; ++i) ++sizes[i];
  return sizes;
}

std::vector<SampleScore> rank_and_chunk(std::vector<SampleScore> scores,
                                        int chunk_count) {
  if (scores.empty()) throw ValidationError("no scores to rank");
  const auto sizes = chunk_sizes(scores.size(), chunk_count);
  std::sort(scores.begin(), scores.end(),
            [](const SampleScore& x, const SampleScore& y) {
              if (x.mean_topb != y.mean_topb) return x.mean_topb > y.mean_topb;
              return x.id < y.id;
            });
  // Rank order runs easiest to hardest, so fill from the easiest chunk.
  std::size_t pos = 0;
  for (int chunk = chunk_count; chunk >= 1; --chunk) {
    for (std::size_t i = 0; i < sizes[static_cast<std::size_t>(chunk - 1)]; ++i) {
      scores[pos].rank = static_cast<int>(pos + 1);
      scores[pos].chunk_index = chunk;
      ++pos;
    }
  }
  return scores;
}

void normalize_hardness(std::span<SampleScore> scores, Normalization mode,
                        ValueRange range) {
  if (scores.empty()) return;
  switch (mode) {
    case Normalization::minmax: {
      auto [lo, hi] = std::minmax_element(
          scores.begin(), scores.end(),
          [](const SampleScore& x, const SampleScore& y) {
            return x.mean_topb < y.mean_topb;
          });
      const double s_min = lo->mean_topb;
      const double s_max = hi->mean_topb;
      for (auto& s : scores) {
        s.hardness = s_max == s_min
                         ? 0.5
                         : std::clamp((s_max - s.mean_topb) / (s_max - s_min),
                                      0.0, 1.0);
      }
      break;
    }
    case Normalization::affine: {
      if (!(range.hi > range.lo)) throw ValidationError("degenerate backend range");
      for (auto& s : scores) {
        s.hardness = std::clamp((range.hi - s.mean_topb) / (range.hi - range.lo),
                                0.0, 1.0) + 0.0;
      }
      break;
    }
    case Normalization::rank: {
      const std::size_t n = scores.size();
      if (n == 1) {
        scores[0].hardness = 0.5;
        break;
      }
      // Negating turns ascending midranks into descending ones.
      std::vector<double> negated(n);
      for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i].mean_topb;
      const auto ranks = midranks(negated);
      for (std::size_t i = 0; i < n; ++i) {
        scores[i].hardness = (ranks[i] - 1.0) / static_cast<double>(n - 1);
      }
      break;
    }
  }
}

std::vector<SweepEntry> sweep_b(const Corpus& train, const Corpus& test,
                                const SimilarityBackend& backend, double a,
                                std::span<const double> b_values,
                                int chunk_count, Normalization normalization,
                                std::optional<std::size_t> threads) {
  if (b_values.empty()) throw ValidationError("empty b sweep");
  ScoringConfig cfg{a, b_values.front(), chunk_count, normalization};
  for (double b : b_values) {
    cfg.b = b;
    cfg.validate();
  }
  if (static_cast<std::size_t>(chunk_count) > test.size()) {
    throw ValidationError("chunk count exceeds the number of test samples");
  }
  const auto rows = compute_rows(backend, train, test, threads);

  std::vector<std::vector<SampleScore>> per_b(b_values.size());
  for (auto& v : per_b) v.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto stats = top_b_sweep(rows.row(i), b_values, test[i].id);
    for (std::size_t j = 0; j < stats.size(); ++j) {
      per_b[j].push_back(from_stats(stats[j], a));
    }
  }
  std::vector<SweepEntry> out;
  out.reserve(b_values.size());
  for (std::size_t j = 0; j < b_values.size(); ++j) {
    cfg.b = b_values[j];
    out.push_back({b_values[j], finish(std::move(per_b[j]), cfg, backend.range())});
  }
  return out;
}

std::size_t count_absent_p_raw(std::span<const SampleScore> scores) {
  return static_cast<std::size_t>(std::count_if(
      scores.begin(), scores.end(),
      [](const SampleScore& s) { return !s.p_raw.has_value(); }));
}

}  // namespace datascore
