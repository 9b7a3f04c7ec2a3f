// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Train-test similarity backends and top-b statistics.
//
// A backend answers similarity(test_sample, train_sample) for single pairs
// and, for bulk work, builds a TrainIndex over a training corpus that fills
// a whole row of similarities for one test sample. Both paths produce
// bit-identical values for the same pair.

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datascore/corpus.hpp"

namespace datascore {

enum class BackendKind { embed_cosine, tfidf_cosine, jaccard };

std::string_view to_string(BackendKind kind);
// Accepts "embed"/"embed-cosine", "tfidf"/"tfidf-cosine", "jaccard".
BackendKind parse_backend_kind(std::string_view name);

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

ValueRange default_range(BackendKind kind);

// Precomputed train-side representation.
class TrainIndex {
 public:
  virtual ~TrainIndex() = default;
  virtual std::size_t size() const = 0;
  // out.size() must equal size(); out[j] = similarity(test_sample, train[j]).
  virtual void fill_row(const Sample& test_sample,
                        std::span<double> out) const = 0;
};

class SimilarityBackend {
 public:
  virtual ~SimilarityBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual ValueRange range() const = 0;
  // The first argument is resolved on the test side, the second on the train
  // side. Only the embedding backend distinguishes the two.
  virtual double similarity(const Sample& test_side,
                            const Sample& train_side) const = 0;
  virtual std::unique_ptr<const TrainIndex> index(const Corpus& train) const = 0;
  // Throws ValidationError if some sample cannot be represented (missing
  // embeddings). A no-op for text backends.
  virtual void check_coverage(const Corpus& train, const Corpus& test) const;
};

std::unique_ptr<SimilarityBackend> make_jaccard();

// Document frequencies are fitted over train and test together.
// Term weight = count * (ln((1 + N) / (1 + df)) + 1), then L2 normalised.
std::unique_ptr<SimilarityBackend> fit_tfidf(const Corpus& train,
                                             const Corpus& test);

// Cosine over external sentence vectors. Test-side ids are looked up in
// test_table and train-side ids in train_table; pass the same table twice
// for a single id space. Tables must share a dimension.
std::unique_ptr<SimilarityBackend> make_embed_cosine(
    std::shared_ptr<const EmbeddingTable> train_table,
    std::shared_ptr<const EmbeddingTable> test_table);

double similarity(const SimilarityBackend& backend, const Sample& a,
                  const Sample& b);

std::vector<double> similarity_row(const SimilarityBackend& backend,
                                   const Sample& test_sample,
                                   const Corpus& train);

// Dense |test| x |train| matrix, row i belonging to test sample i.
class SimilarityRows {
 public:
  SimilarityRows(std::size_t n_test, std::size_t n_train)
      : n_test_(n_test), n_train_(n_train), values_(n_test * n_train) {}

  std::size_t n_test() const { return n_test_; }
  std::size_t n_train() const { return n_train_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * n_train_, n_train_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(values_).subspan(i * n_train_, n_train_);
  }
  std::span<double> values() { return values_; }

 private:
  std::size_t n_test_;
  std::size_t n_train_;
  std::vector<double> values_;
};

// Rows are computed in parallel and stored by test position, so the result
// does not depend on the thread count.
SimilarityRows compute_rows(const SimilarityBackend& backend,
                            const Corpus& train, const Corpus& test,
                            std::optional<std::size_t> threads = {});

struct TopBStats {
  std::string test_id;
  std::size_t k = 0;
  double sum_topb = 0.0;
  double mean_topb = 0.0;
};

// k = min(n, max(1, ceil(b * n))). A product b * n within 1e-9 (relative) of
// an integer is taken as that integer, so b = 0.3, n = 10 gives k = 3.
std::size_t top_b_count(std::size_t n, double b);

// The k largest values are summed in descending order, which is exactly what
// a full descending sort followed by a prefix sum produces.
TopBStats top_b_stats(std::span<const double> row, double b,
                      std::string test_id = {});

// Same as calling top_b_stats for each fraction, with a single selection.
std::vector<TopBStats> top_b_sweep(std::span<const double> row,
                                   std::span<const double> fractions,
                                   std::string_view test_id = {});

inline constexpr std::array<double, 9> kDefaultSweep = {
    0.01, 0.05, 0.10, 0.25, 0.30, 0.40, 0.50, 0.75, 1.00};

}  // namespace datascore
