// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/scoring.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "datascore/error.hpp"
#include "test_util.hpp"

namespace datascore {
namespace {

using testing::make_corpus;

std::vector<SampleScore> scores_with_means(const std::vector<double>& means) {
  std::vector<SampleScore> out;
  for (std::size_t i = 0; i < means.size(); ++i) {
    SampleScore s;
    s.id = "s" + std::to_string(i);
    s.mean_topb = means[i];
    s.sum_topb = means[i];
    out.push_back(s);
  }
  return out;
}

const SampleScore& by_id(const std::vector<SampleScore>& scores, const std::string& id) {
  auto it = std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.id == id; });
  if (it == scores.end()) throw std::runtime_error("no score for " + id);
  return *it;
}

class ScoreSamples : public ::testing::Test {
 protected:
  ScoreSamples()
      : train_(make_corpus(Role::train, {"good movie", "bad movie"}, "t")),
        test_(make_corpus(Role::test, {"good film movie"}, "s")),
        backend_(make_jaccard()) {}

  Corpus train_;
  Corpus test_;
  std::unique_ptr<SimilarityBackend> backend_;
};

TEST_F(ScoreSamples, WholeRow) {
  ScoringConfig cfg{1.0, 1.0, 1, Normalization::minmax};
  auto scores = score_samples(train_, test_, *backend_, cfg);
  ASSERT_EQ(scores.size(), 1u);
  EXPECT_DOUBLE_EQ(scores[0].sum_topb, 11.0 / 12.0);
  EXPECT_DOUBLE_EQ(scores[0].mean_topb, 11.0 / 24.0);
  ASSERT_TRUE(scores[0].p_raw);
  EXPECT_DOUBLE_EQ(*scores[0].p_raw, 12.0 / 11.0);
  EXPECT_EQ(scores[0].rank, 1);
  EXPECT_EQ(scores[0].chunk_index, 1);
}

TEST_F(ScoreSamples, TopHalf) {
  ScoringConfig cfg{1.0, 0.5, 1, Normalization::minmax};
  auto scores = score_samples(train_, test_, *backend_, cfg);
  EXPECT_DOUBLE_EQ(scores[0].sum_topb, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*scores[0].p_raw, 1.5);
}

TEST_F(ScoreSamples, ScaleParameterOnlyMovesPRaw) {
  Corpus test = make_corpus(Role::test, {"good film movie", "bad plot", "movie", "nothing here"}, "s");
  ScoringConfig one{1.0, 0.5, 2, Normalization::minmax};
  ScoringConfig two = one;
  two.a = 2.0;
  auto x = score_samples(train_, test, *backend_, one);
  auto y = score_samples(train_, test, *backend_, two);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].id, y[i].id);
    EXPECT_EQ(x[i].hardness, y[i].hardness);
    EXPECT_EQ(x[i].rank, y[i].rank);
    EXPECT_EQ(x[i].chunk_index, y[i].chunk_index);
    ASSERT_EQ(x[i].p_raw.has_value(), y[i].p_raw.has_value());
    if (x[i].p_raw) EXPECT_EQ(*y[i].p_raw, 2.0 * *x[i].p_raw);
  }
}

TEST_F(ScoreSamples, ZeroSimilarityLeavesPRawAbsent) {
  Corpus test = make_corpus(Role::test, {"quantum", "good movie"}, "s");
  auto scores = score_samples(train_, test, *backend_, {1.0, 1.0, 1, Normalization::minmax});
  EXPECT_EQ(count_absent_p_raw(scores), 1u);
  EXPECT_FALSE(by_id(scores, "s0").p_raw);
  EXPECT_EQ(by_id(scores, "s0").hardness, 1.0);
}

TEST_F(ScoreSamples, ConfigValidation) {
  EXPECT_THROW(score_samples(train_, test_, *backend_, {0.0, 0.1, 1}), ValidationError);
  EXPECT_THROW(score_samples(train_, test_, *backend_, {-1.0, 0.1, 1}), ValidationError);
  EXPECT_THROW(score_samples(train_, test_, *backend_, {1.0, 0.0, 1}), ValidationError);
  EXPECT_THROW(score_samples(train_, test_, *backend_, {1.0, 1.1, 1}), ValidationError);
  EXPECT_THROW(score_samples(train_, test_, *backend_, {1.0, 0.1, 0}), ValidationError);
  EXPECT_THROW(score_samples(train_, test_, *backend_, {1.0, 0.1, 2}), ValidationError);
}

TEST(RankAndChunk, EvenSplit) {
  auto scores = rank_and_chunk(scores_with_means({0.9, 0.1, 0.5, 0.2, 0.8, 0.4}), 3);
  std::vector<int> chunks;
  for (const auto& s : scores) chunks.push_back(s.chunk_index);
  EXPECT_EQ(chunks, (std::vector<int>{3, 3, 2, 2, 1, 1}));
  EXPECT_EQ(by_id(scores, "s1").chunk_index, 1);  // 0.1
  EXPECT_EQ(by_id(scores, "s3").chunk_index, 1);  // 0.2
  EXPECT_EQ(scores.front().id, "s0");
  EXPECT_EQ(scores.front().rank, 1);
  EXPECT_EQ(scores.back().rank, 6);
}

TEST(RankAndChunk, RemainderGoesToHardest) {
  EXPECT_EQ(chunk_sizes(7, 3), (std::vector<std::size_t>{3, 2, 2}));
  EXPECT_EQ(chunk_sizes(8, 3), (std::vector<std::size_t>{3, 3, 2}));
  EXPECT_EQ(chunk_sizes(1000, 7),
            (std::vector<std::size_t>{143, 143, 143, 143, 143, 143, 142}));
  auto scores = rank_and_chunk(scores_with_means({0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}), 3);
  int hardest = 0;
  for (const auto& s : scores) hardest += s.chunk_index == 1;
  EXPECT_EQ(hardest, 3);
  EXPECT_EQ(by_id(scores, "s4").chunk_index, 1);
  EXPECT_EQ(by_id(scores, "s3").chunk_index, 2);
}

TEST(RankAndChunk, TiesBreakByIdAscending) {
  std::vector<SampleScore> scores;
  for (const char* id : {"c", "a", "d", "b"}) scores.push_back({id, 0.5, 0.5, {}, 0, 0, 0});
  auto ranked = rank_and_chunk(scores, 2);
  EXPECT_EQ(ranked[0].id, "a");
  EXPECT_EQ(ranked[3].id, "d");
  EXPECT_EQ(ranked[0].chunk_index, 2);
  EXPECT_EQ(ranked[3].chunk_index, 1);
}

TEST(RankAndChunk, Errors) {
  EXPECT_THROW(rank_and_chunk({}, 1), ValidationError);
  EXPECT_THROW(rank_and_chunk(scores_with_means({0.1, 0.2}), 3), ValidationError);
  EXPECT_THROW(chunk_sizes(5, 0), ValidationError);
}

TEST(RankAndChunk, SizesDifferByAtMostOne) {
  for (std::size_t n = 1; n <= 60; ++n) {
    for (int c = 1; c <= static_cast<int>(n) && c <= 12; ++c) {
      auto sizes = chunk_sizes(n, c);
      ASSERT_EQ(static_cast<int>(sizes.size()), c);
      std::size_t total = 0;
      for (auto s : sizes) total += s;
      EXPECT_EQ(total, n);
      auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
      EXPECT_LE(*hi - *lo, 1u);
      EXPECT_TRUE(std::is_sorted(sizes.rbegin(), sizes.rend()));
    }
  }
}

std::vector<double> hardness_of(std::vector<SampleScore> scores) {
  std::vector<double> h;
  for (const auto& s : scores) h.push_back(s.hardness);
  return h;
}

TEST(NormalizeHardness, MinMax) {
  auto scores = scores_with_means({0.2, 0.5, 0.8});
  normalize_hardness(scores, Normalization::minmax, {0, 1});
  EXPECT_EQ(hardness_of(scores), (std::vector<double>{1.0, 0.5, 0.0}));
}

TEST(NormalizeHardness, AllEqual) {
  for (auto mode : {Normalization::minmax, Normalization::rank}) {
    auto scores = scores_with_means({0.3, 0.3, 0.3});
    normalize_hardness(scores, mode, {0, 1});
    EXPECT_EQ(hardness_of(scores), (std::vector<double>{0.5, 0.5, 0.5}));
  }
  auto single = scores_with_means({0.3});
  normalize_hardness(single, Normalization::rank, {0, 1});
  EXPECT_EQ(single[0].hardness, 0.5);
}

TEST(NormalizeHardness, Affine) {
  auto scores = scores_with_means({0.25, 1.0, 0.0});
  normalize_hardness(scores, Normalization::affine, {0, 1});
  EXPECT_EQ(hardness_of(scores), (std::vector<double>{0.75, 0.0, 1.0}));
  auto cosine = scores_with_means({-1.0, 0.0, 1.0});
  normalize_hardness(cosine, Normalization::affine, {-1, 1});
  EXPECT_EQ(hardness_of(cosine), (std::vector<double>{1.0, 0.5, 0.0}));
}

TEST(NormalizeHardness, RankUsesMidranks) {
  auto scores = scores_with_means({0.9, 0.5, 0.5, 0.1, 0.7});
  normalize_hardness(scores, Normalization::rank, {0, 1});
  EXPECT_EQ(hardness_of(scores), (std::vector<double>{0.0, 0.625, 0.625, 1.0, 0.25}));
}

TEST(NormalizeHardness, ReversesMeanOrderOnRandomSets) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> means(2 + rng() % 50);
    for (auto& m : means) m = (rng() % 4 == 0) ? 0.5 : value(rng);
    for (auto mode : {Normalization::minmax, Normalization::affine, Normalization::rank}) {
      auto scores = scores_with_means(means);
      normalize_hardness(scores, mode, {0, 1});
      for (const auto& x : scores) {
        EXPECT_GE(x.hardness, 0.0);
        EXPECT_LE(x.hardness, 1.0);
        for (const auto& y : scores) {
          if (x.mean_topb > y.mean_topb) EXPECT_LE(x.hardness, y.hardness);
          if (x.mean_topb == y.mean_topb) EXPECT_EQ(x.hardness, y.hardness);
          if (mode == Normalization::rank && x.mean_topb > y.mean_topb) {
            EXPECT_LT(x.hardness, y.hardness);
          }
        }
      }
    }
  }
}

TEST(PRaw, StrictlyDecreasingInSum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(1e-6, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    SimilarityRows rows(30, 1);
    for (std::size_t i = 0; i < 30; ++i) rows.row(i)[0] = value(rng);
    std::vector<std::string> texts(30, "x");
    auto scores = score_rows(rows, make_corpus(Role::test, texts, "s"), {0, 100},
                             {a, 1.0, 3, Normalization::minmax});
    for (const auto& x : scores) {
      EXPECT_EQ(*x.p_raw, a / x.sum_topb);
      for (const auto& y : scores) {
        if (x.sum_topb < y.sum_topb) EXPECT_GT(*x.p_raw, *y.p_raw);
      }
    }
  }
}

TEST(SweepB, NineStepsFromOneRowComputation) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> words = {"good", "bad", "movie", "film", "plot", "cast"};
  auto text = [&] {
    std::string t;
    for (int i = 0; i < 4; ++i) t += words[rng() % words.size()] + " ";
    return t;
  };
  std::vector<std::string> tr, te;
  for (int i = 0; i < 50; ++i) tr.push_back(text());
  for (int i = 0; i < 12; ++i) te.push_back(text());
  Corpus train = make_corpus(Role::train, tr, "t");
  Corpus test = make_corpus(Role::test, te, "s");
  auto backend = make_jaccard();
  auto sweep = sweep_b(train, test, *backend, 1.0);
  ASSERT_EQ(sweep.size(), 9u);
  for (std::size_t j = 0; j < sweep.size(); ++j) {
    EXPECT_EQ(sweep[j].b, kDefaultSweep[j]);
    auto direct = score_samples(train, test, *backend, {1.0, kDefaultSweep[j], 3, Normalization::minmax});
    ASSERT_EQ(direct.size(), sweep[j].scores.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      EXPECT_EQ(direct[i].id, sweep[j].scores[i].id);
      EXPECT_EQ(direct[i].sum_topb, sweep[j].scores[i].sum_topb);
      EXPECT_EQ(direct[i].hardness, sweep[j].scores[i].hardness);
      EXPECT_EQ(direct[i].chunk_index, sweep[j].scores[i].chunk_index);
    }
  }
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto row = similarity_row(*backend, test[i], train);
    double full = 0.0;
    std::vector<double> sorted(row);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (double x : sorted) full += x;
    EXPECT_EQ(by_id(sweep.back().scores, test[i].id).sum_topb, full);
    for (std::size_t j = 1; j < sweep.size(); ++j) {
      EXPECT_LE(by_id(sweep[j].scores, test[i].id).mean_topb,
                by_id(sweep[j - 1].scores, test[i].id).mean_topb);
    }
  }
  EXPECT_THROW(sweep_b(train, test, *backend, 1.0, std::vector<double>{}), ValidationError);
  EXPECT_THROW(sweep_b(train, test, *backend, 1.0, std::vector<double>{0.5, 2.0}),
               ValidationError);
}

TEST(ParseNormalization, Names) {
  EXPECT_EQ(parse_normalization("rank"), Normalization::rank);
  EXPECT_EQ(to_string(Normalization::affine), "affine");
  EXPECT_THROW(parse_normalization("zscore"), ValidationError);
}

}  // namespace
}  // namespace datascore
