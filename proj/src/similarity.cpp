// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>

#include "datascore/error.hpp"
#include "datascore/parallel.hpp"
#include "datascore/tokenize.hpp"

namespace datascore {

namespace {

// Clamp into the declared range; "+ 0.0" folds -0.0 into +0.0.
double clamp_to(double v, ValueRange r) { return std::clamp(v, r.lo, r.hi) + 0.0; }

// ---------------------------------------------------------------------------
// Jaccard over token sets.

std::vector<std::string> token_set(std::string_view text) {
  auto tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

double jaccard_from_counts(std::size_t inter, std::size_t a, std::size_t b) {
  const std::size_t uni = a + b - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

class JaccardIndex final : public TrainIndex {
 public:
  explicit JaccardIndex(const Corpus& train) : doc_sizes_(train.size()) {
    for (std::size_t j = 0; j < train.size(); ++j) {
      auto set = token_set(train[j].text);
      doc_sizes_[j] = static_cast<uint32_t>(set.size());
      for (auto& term : set) {
        auto [it, inserted] =
            vocab_.try_emplace(std::move(term), static_cast<uint32_t>(postings_.size()));
        if (inserted) postings_.emplace_back();
        postings_[it->second].push_back(static_cast<uint32_t>(j));
      }
    }
  }

  std::size_t size() const override { return doc_sizes_.size(); }

  void fill_row(const Sample& test_sample, std::span<double> out) const override {
    const auto set = token_set(test_sample.text);
    std::vector<uint32_t> inter(doc_sizes_.size(), 0);
    for (const auto& term : set) {
      auto it = vocab_.find(term);
      if (it == vocab_.end()) continue;
      for (uint32_t doc : postings_[it->second]) ++inter[doc];
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = jaccard_from_counts(inter[j], set.size(), doc_sizes_[j]);
    }
  }

 private:
  std::vector<uint32_t> doc_sizes_;
  std::unordered_map<std::string, uint32_t> vocab_;
  std::vector<std::vector<uint32_t>> postings_;
};

class JaccardBackend final : public SimilarityBackend {
 public:
  BackendKind kind() const override { return BackendKind::jaccard; }
  ValueRange range() const override { return {0.0, 1.0}; }

  double similarity(const Sample& a, const Sample& b) const override {
    const auto sa = token_set(a.text);
    const auto sb = token_set(b.text);
    std::size_t inter = 0;
    auto ia = sa.begin();
    auto ib = sb.begin();
    while (ia != sa.end() && ib != sb.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++inter;
        ++ia;
        ++ib;
      }
    }
    return jaccard_from_counts(inter, sa.size(), sb.size());
  }

  std::unique_ptr<const TrainIndex> index(const Corpus& train) const override {
    return std::make_unique<JaccardIndex>(train);
  }
};

// ---------------------------------------------------------------------------
// TF-IDF cosine.

struct TermWeight {
  std::string term;
  double weight;
};

// Sorted by term; unit L2 norm unless empty.
using SparseVector = std::vector<TermWeight>;

class TfidfModel {
 public:
  TfidfModel(const Corpus& train, const Corpus& test)
      : n_docs_(train.size() + test.size()) {
    auto count_docs = [this](const Corpus& corpus) {
      std::size_t non_empty = 0;
      for (const Sample& s : corpus.samples()) {
        const auto set = token_set(s.text);
        if (!set.empty()) ++non_empty;
        for (const auto& term : set) ++df_[term];
      }
      return non_empty;
    };
    if (count_docs(train) == 0) {
      throw ValidationError("tfidf: every train document tokenizes to empty");
    }
    if (count_docs(test) == 0) {
      throw ValidationError("tfidf: every test document tokenizes to empty");
    }
  }

  SparseVector vectorize(std::string_view text) const {
    std::map<std::string, std::size_t> counts;
    for (auto& token : tokenize(text)) ++counts[std::move(token)];
    SparseVector vec;
    vec.reserve(counts.size());
    double norm_sq = 0.0;
    for (auto& [term, count] : counts) {
      const double w = static_cast<double>(count) * idf(term);
      norm_sq += w * w;
      vec.push_back({term, w});
    }
    if (norm_sq > 0.0) {
      const double norm = std::sqrt(norm_sq);
      for (auto& tw : vec) tw.weight /= norm;
    }
    return vec;
  }

 private:
  double idf(const std::string& term) const {
    auto it = df_.find(term);
    const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((1.0 + static_cast<double>(n_docs_)) / (1.0 + df)) + 1.0;
  }

  std::size_t n_docs_;
  std::unordered_map<std::string, std::size_t> df_;
};

class TfidfIndex final : public TrainIndex {
 public:
  TfidfIndex(std::shared_ptr<const TfidfModel> model, const Corpus& train)
      : model_(std::move(model)), n_train_(train.size()) {
    for (std::size_t j = 0; j < train.size(); ++j) {
      for (auto& tw : model_->vectorize(train[j].text)) {
        auto [it, inserted] = vocab_.try_emplace(
            std::move(tw.term), static_cast<uint32_t>(postings_.size()));
        if (inserted) postings_.emplace_back();
        postings_[it->second].push_back({static_cast<uint32_t>(j), tw.weight});
      }
    }
  }

  std::size_t size() const override { return n_train_; }

  void fill_row(const Sample& test_sample, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    // Terms are visited in sorted order, matching the pairwise merge.
    for (const auto& tw : model_->vectorize(test_sample.text)) {
      auto it = vocab_.find(tw.term);
      if (it == vocab_.end()) continue;
      for (const auto& [doc, w] : postings_[it->second]) out[doc] += tw.weight * w;
    }
    for (double& v : out) v = clamp_to(v, {0.0, 1.0});
  }

 private:
  struct Posting {
    uint32_t doc;
    double weight;
  };
  std::shared_ptr<const TfidfModel> model_;
  std::size_t n_train_;
  std::unordered_map<std::string, uint32_t> vocab_;
  std::vector<std::vector<Posting>> postings_;
};

class TfidfBackend final : public SimilarityBackend {
 public:
  explicit TfidfBackend(std::shared_ptr<const TfidfModel> model)
      : model_(std::move(model)) {}

  BackendKind kind() const override { return BackendKind::tfidf_cosine; }
  ValueRange range() const override { return {0.0, 1.0}; }

  double similarity(const Sample& a, const Sample& b) const override {
    const auto va = model_->vectorize(a.text);
    const auto vb = model_->vectorize(b.text);
    double dot = 0.0;
    auto ia = va.begin();
    auto ib = vb.begin();
    while (ia != va.end() && ib != vb.end()) {
      if (ia->term < ib->term) {
        ++ia;
      } else if (ib->term < ia->term) {
        ++ib;
      } else {
        dot += ia->weight * ib->weight;
        ++ia;
        ++ib;
      }
    }
    return clamp_to(dot, range());
  }

  std::unique_ptr<const TrainIndex> index(const Corpus& train) const override {
    return std::make_unique<TfidfIndex>(model_, train);
  }

 private:
  std::shared_ptr<const TfidfModel> model_;
};

// ---------------------------------------------------------------------------
// Cosine over embeddings.

double l2_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double cosine(std::span<const double> u, double norm_u, std::span<const double> v,
              double norm_v) {
  if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  return clamp_to(dot / (norm_u * norm_v), {-1.0, 1.0});
}

std::span<const double> lookup(const EmbeddingTable& table, const Sample& s,
                               std::string_view side) {
  auto v = table.find(s.id);
  if (!v) {
    throw ValidationError("missing " + std::string(side) + " embedding for '" +
                          s.id + "'");
  }
  return *v;
}

class EmbedIndex final : public TrainIndex {
 public:
  EmbedIndex(std::shared_ptr<const EmbeddingTable> train_table,
             std::shared_ptr<const EmbeddingTable> test_table, const Corpus& train)
      : train_table_(std::move(train_table)), test_table_(std::move(test_table)) {
    rows_.reserve(train.size());
    norms_.reserve(train.size());
    for (const Sample& s : train.samples()) {
      auto v = lookup(*train_table_, s, "train");
      rows_.push_back(v);
      norms_.push_back(l2_norm(v));
    }
  }

  std::size_t size() const override { return rows_.size(); }

  void fill_row(const Sample& test_sample, std::span<double> out) const override {
    const auto u = lookup(*test_table_, test_sample, "test");
    const double nu = l2_norm(u);
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      out[j] = cosine(u, nu, rows_[j], norms_[j]);
    }
  }

 private:
  std::shared_ptr<const EmbeddingTable> train_table_;
  std::shared_ptr<const EmbeddingTable> test_table_;
  std::vector<std::span<const double>> rows_;
  std::vector<double> norms_;
};

class EmbedBackend final : public SimilarityBackend {
 public:
  EmbedBackend(std::shared_ptr<const EmbeddingTable> train_table,
               std::shared_ptr<const EmbeddingTable> test_table)
      : train_table_(std::move(train_table)), test_table_(std::move(test_table)) {
    if (!train_table_ || !test_table_) {
      throw ValidationError("embed-cosine needs both embedding tables");
    }
    if (train_table_->dim() != test_table_->dim()) {
      throw ValidationError("embedding dimension mismatch: train " +
                            std::to_string(train_table_->dim()) + ", test " +
                            std::to_string(test_table_->dim()));
    }
  }

  BackendKind kind() const override { return BackendKind::embed_cosine; }
  ValueRange range() const override { return {-1.0, 1.0}; }

  double similarity(const Sample& test_side, const Sample& train_side) const override {
    const auto u = lookup(*test_table_, test_side, "test");
    const auto v = lookup(*train_table_, train_side, "train");
    return cosine(u, l2_norm(u), v, l2_norm(v));
  }

  std::unique_ptr<const TrainIndex> index(const Corpus& train) const override {
    return std::make_unique<EmbedIndex>(train_table_, test_table_, train);
  }

  void check_coverage(const Corpus& train, const Corpus& test) const override {
    auto check = [](const EmbeddingTable& table, const Corpus& corpus,
                    std::string_view side) {
      std::size_t missing = 0;
      const Sample* first = nullptr;
      for (const Sample& s : corpus.samples()) {
        if (!table.contains(s.id)) {
          if (!first) first = &s;
          ++missing;
        }
      }
      if (missing == corpus.size()) {
        throw ValidationError("no " + std::string(side) +
                              " sample has an embedding");
      }
      if (missing > 0) {
        throw ValidationError("missing " + std::string(side) +
                              " embedding for '" + first->id + "' (" +
                              std::to_string(missing) + " of " +
                              std::to_string(corpus.size()) + " missing)");
      }
    };
    check(*train_table_, train, "train");
    check(*test_table_, test, "test");
  }

 private:
  std::shared_ptr<const EmbeddingTable> train_table_;
  std::shared_ptr<const EmbeddingTable> test_table_;
};

}  // namespace

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::embed_cosine:
      return "embed-cosine";
    case BackendKind::tfidf_cosine:
      return "tfidf-cosine";
    case BackendKind::jaccard:
      return "jaccard";
  }
  return "unknown";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "embed" || name == "embed-cosine") return BackendKind::embed_cosine;
  if (name == "tfidf" || name == "tfidf-cosine") return BackendKind::tfidf_cosine;
  if (name == "jaccard") return BackendKind::jaccard;
  throw ValidationError("unknown backend '" + std::string(name) + "'");
}

ValueRange default_range(BackendKind kind) {
  return kind == BackendKind::embed_cosine ? ValueRange{-1.0, 1.0}
                                           : ValueRange{0.0, 1.0};
}

void SimilarityBackend::check_coverage(const Corpus&, const Corpus&) const {}

std::unique_ptr<SimilarityBackend> make_jaccard() {
  return std::make_unique<JaccardBackend>();
}

std::unique_ptr<SimilarityBackend> fit_tfidf(const Corpus& train,
                                             const Corpus& test) {
  return std::make_unique<TfidfBackend>(
      std::make_shared<const TfidfModel>(train, test));
}

std::unique_ptr<SimilarityBackend> make_embed_cosine(
    std::shared_ptr<const EmbeddingTable> train_table,
    std::shared_ptr<const EmbeddingTable> test_table) {
  return std::make_unique<EmbedBackend>(std::move(train_table),
                                        std::move(test_table));
}

double similarity(const SimilarityBackend& backend, const Sample& a,
                  const Sample& b) {
  return backend.similarity(a, b);
}

std::vector<double> similarity_row(const SimilarityBackend& backend,
                                   const Sample& test_sample,
                                   const Corpus& train) {
  auto index = backend.index(train);
  std::vector<double> row(train.size());
  index->fill_row(test_sample, row);
  return row;
}

SimilarityRows compute_rows(const SimilarityBackend& backend,
                            const Corpus& train, const Corpus& test,
                            std::optional<std::size_t> threads) {
  backend.check_coverage(train, test);
  auto index = backend.index(train);
  SimilarityRows rows(test.size(), train.size());
  parallel_for(test.size(), resolve_thread_count(threads),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   index->fill_row(test[i], rows.row(i));
                 }
               });
  return rows;
}

}  // namespace datascore
