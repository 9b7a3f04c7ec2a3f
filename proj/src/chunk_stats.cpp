// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/chunk_stats.hpp"

#include <string>
#include <unordered_map>

#include "datascore/error.hpp"
#include "datascore/wood.hpp"

namespace datascore {

std::vector<const PredictionRecord*> align_predictions(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions) {
  std::unordered_map<std::string, const PredictionRecord*> by_id;
  by_id.reserve(predictions.size());
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, &p).second) {
      throw ValidationError("duplicate prediction for '" + p.id + "'");
    }
  }
  std::vector<const PredictionRecord*> aligned;
  aligned.reserve(scores.size());
  for (const auto& s : scores) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      throw ValidationError("missing prediction for '" + s.id + "'");
    }
    aligned.push_back(it->second);
    by_id.erase(it);
  }
  if (!by_id.empty()) {
    // Report the first stray id in prediction order.
    for (const auto& p : predictions) {
      if (by_id.count(p.id) != 0) {
        throw ValidationError("prediction for unscored id '" + p.id + "'");
      }
    }
  }
  return aligned;
}

std::vector<ChunkStats> summarize_chunks(
    std::span<const SampleScore> scores,
    std::span<const PredictionRecord> predictions, int chunk_count) {
  const auto aligned = align_predictions(scores, predictions);
  std::vector<ChunkStats> stats(static_cast<std::size_t>(chunk_count));

  struct ConfAccumulator {
    double sum = 0.0;
    std::size_t count = 0;
    bool complete = true;
  };
  std::vector<ConfAccumulator> conf_correct(stats.size());
  std::vector<ConfAccumulator> conf_incorrect(stats.size());

  for (int c = 1; c <= chunk_count; ++c) {
    auto& st = stats[static_cast<std::size_t>(c - 1)];
    st.chunk_index = c;
    st.weight = chunk_weight(c, chunk_count);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int c = scores[i].chunk_index;
    if (c < 1 || c > chunk_count) {
      throw ValidationError("score for '" + scores[i].id +
                            "' has chunk index " + std::to_string(c) +
                            " outside 1.." + std::to_string(chunk_count));
    }
    const auto slot = static_cast<std::size_t>(c - 1);
    auto& st = stats[slot];
    ++st.size;
    st.mean_sts += scores[i].mean_topb;
    const PredictionRecord& p = *aligned[i];
    if (p.correct) ++st.n_correct;
    auto& acc = p.correct ? conf_correct[slot] : conf_incorrect[slot];
    if (p.confidence) {
      acc.sum += *p.confidence;
      ++acc.count;
    } else {
      acc.complete = false;
    }
  }
  for (std::size_t slot = 0; slot < stats.size(); ++slot) {
    auto& st = stats[slot];
    if (st.size == 0) continue;
    st.mean_sts /= static_cast<double>(st.size);
    st.error_rate = static_cast<double>(st.size - st.n_correct) /
                    static_cast<double>(st.size);
    auto mean_of = [](const ConfAccumulator& acc) -> std::optional<double> {
      if (!acc.complete || acc.count == 0) return std::nullopt;
      return acc.sum / static_cast<double>(acc.count);
    };
    st.mean_conf_correct = mean_of(conf_correct[slot]);
    st.mean_conf_incorrect = mean_of(conf_incorrect[slot]);
  }
  return stats;
}

}  // namespace datascore
