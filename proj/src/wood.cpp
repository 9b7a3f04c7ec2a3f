// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/wood.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "datascore/error.hpp"

namespace datascore {

std::string_view to_string(WeightScheme scheme) {
  return scheme == WeightScheme::chunk_integer ? "chunk-integer" : "p-raw";
}

WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "chunk" || name == "chunk-integer") return WeightScheme::chunk_integer;
  if (name == "p" || name == "p-raw") return WeightScheme::p_raw;
  throw ValidationError("unknown weight scheme '" + std::string(name) + "'");
}

void EvalConfig::validate() const {
  if (!std::isfinite(reward_correct) || !std::isfinite(penalty_incorrect) ||
      !(reward_correct > penalty_incorrect)) {
    throw ValidationError("reward for a correct answer must exceed the penalty");
  }
}

int chunk_weight(int chunk_index, int chunk_count) {
  if (chunk_count < 1 || chunk_index < 1 || chunk_index > chunk_count) {
    throw ValidationError("chunk index " + std::to_string(chunk_index) +
                          " outside 1.." + std::to_string(chunk_count));
  }
  return chunk_count - chunk_index + 1;
}

double rescale(double signed_score, const EvalConfig& cfg) {
  return (signed_score - cfg.penalty_incorrect) /
         (cfg.reward_correct - cfg.penalty_incorrect);
}

double accuracy(std::span<const PredictionRecord> predictions,
                const EvalConfig& cfg) {
  if (predictions.empty()) throw ValidationError("accuracy of no predictions");
  cfg.validate();
  double total = 0.0;
  for (const auto& p : predictions) {
    total += p.correct ? cfg.reward_correct : cfg.penalty_incorrect;
  }
  return rescale(total / static_cast<double>(predictions.size()), cfg);
}

WoodResult wood_score(std::span<const SampleScore> scores,
                      std::span<const PredictionRecord> predictions,
                      const EvalConfig& cfg, std::string model_name) {
  cfg.validate();
  if (scores.empty()) throw ValidationError("no scores to evaluate");
  const auto aligned = align_predictions(scores, predictions);

  int chunk_count = 0;
  for (const auto& s : scores) {
    if (s.chunk_index < 1) {
      throw ValidationError("score for '" + s.id + "' has no chunk assigned");
    }
    chunk_count = std::max(chunk_count, s.chunk_index);
  }

  double numerator = 0.0;
  double denominator = 0.0;
  double plain = 0.0;
  std::vector<double> p_sums(static_cast<std::size_t>(chunk_count), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double w = 0.0;
    if (cfg.weight_scheme == WeightScheme::chunk_integer) {
      w = chunk_weight(scores[i].chunk_index, chunk_count);
    } else {
      if (!scores[i].p_raw) {
        throw ValidationError("p-raw weighting needs p_raw for '" +
                              scores[i].id + "'");
      }
      w = *scores[i].p_raw;
      p_sums[static_cast<std::size_t>(scores[i].chunk_index - 1)] += w;
    }
    const double e = aligned[i]->correct ? cfg.reward_correct : cfg.penalty_incorrect;
    numerator += e * w;
    denominator += w;
    plain += e;
  }

  WoodResult result;
  result.model_name = std::move(model_name);
  result.W = numerator / denominator;
  result.W_rescaled = rescale(result.W, cfg);
  result.accuracy = rescale(plain / static_cast<double>(scores.size()), cfg);
  result.weight_scheme = cfg.weight_scheme;
  result.chunk_count = chunk_count;
  result.per_chunk = summarize_chunks(scores, predictions, chunk_count);
  if (cfg.weight_scheme == WeightScheme::p_raw) {
    for (auto& chunk : result.per_chunk) {
      chunk.weight = chunk.size == 0
                         ? 0.0
                         : p_sums[static_cast<std::size_t>(chunk.chunk_index - 1)] /
                               static_cast<double>(chunk.size);
    }
  }
  return result;
}

RankingReport compare_rankings(std::span<const WoodResult> results) {
  if (results.size() < 2) {
    throw ValidationError("ranking comparison needs at least two models");
  }
  std::set<std::string> names;
  for (const auto& r : results) {
    if (!names.insert(r.model_name).second) {
      throw ValidationError("duplicate model name '" + r.model_name + "'");
    }
  }

  auto order_by = [&](auto metric) {
    std::vector<const WoodResult*> order;
    for (const auto& r : results) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [&](const WoodResult* x, const WoodResult* y) {
                const double mx = metric(*x);
                const double my = metric(*y);
                if (mx != my) return mx > my;
                return x->model_name < y->model_name;
              });
    std::vector<std::string> names_out;
    for (const auto* r : order) names_out.push_back(r->model_name);
    return names_out;
  };

  RankingReport report;
  report.by_accuracy = order_by([](const WoodResult& r) { return r.accuracy; });
  report.by_wood = order_by([](const WoodResult& r) { return r.W; });

  std::unordered_map<std::string, std::size_t> wood_pos;
  for (std::size_t i = 0; i < report.by_wood.size(); ++i) {
    wood_pos[report.by_wood[i]] = i;
  }
  const std::size_t n = report.by_accuracy.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (wood_pos[report.by_accuracy[i]] != i) ++report.rank_changes;
    for (std::size_t j = i + 1; j < n; ++j) {
      // i precedes j by accuracy; discordant if the WOOD order flips them.
      if (wood_pos[report.by_accuracy[i]] > wood_pos[report.by_accuracy[j]]) {
        ++report.kendall_tau_distance;
      }
    }
  }
  return report;
}

}  // namespace datascore
