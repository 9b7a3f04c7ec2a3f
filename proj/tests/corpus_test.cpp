// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include "datascore/corpus.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "datascore/error.hpp"
#include "test_util.hpp"

namespace datascore {
namespace {

using testing::TempDir;

// Asserts that fn throws ValidationError whose message contains needle.
template <typename Fn>
void expect_validation_error(Fn&& fn, const std::string& needle) {
  try {
    fn();
    ADD_FAILURE() << "expected ValidationError containing '" << needle << "'";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, PreservesFileOrder) {
  TempDir dir;
  auto path = dir.write("c.jsonl",
                        "{\"id\":\"a\",\"text\":\"good movie\"}\n"
                        "{\"id\":\"b\",\"text\":\"bad movie\",\"label\":\"neg\"}\n");
  Corpus c = load_corpus(path, Role::train);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].id, "a");
  EXPECT_EQ(c[0].text, "good movie");
  EXPECT_FALSE(c[0].label.has_value());
  EXPECT_EQ(c[1].id, "b");
  EXPECT_EQ(c[1].label, "neg");
  EXPECT_EQ(c.role(), Role::train);
  EXPECT_NE(c.find("b"), nullptr);
  EXPECT_EQ(c.find("z"), nullptr);
}

TEST(LoadCorpus, DuplicateIdNamesLine) {
  TempDir dir;
  auto path = dir.write("c.jsonl",
                        "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
  expect_validation_error([&] { load_corpus(path, Role::test); },
                          "duplicate id 'a' at line 2");
}

TEST(LoadCorpus, EmptyFile) {
  TempDir dir;
  auto path = dir.write("c.jsonl", "");
  expect_validation_error([&] { load_corpus(path, Role::test); }, "empty corpus");
}

TEST(LoadCorpus, BlankTextRejected) {
  TempDir dir;
  auto path = dir.write("c.jsonl", "{\"id\":\"a\",\"text\":\"  \\t \"}\n");
  expect_validation_error([&] { load_corpus(path, Role::test); }, "empty text");
}

TEST(LoadCorpus, MalformedLineReportsLineNumber) {
  TempDir dir;
  auto path = dir.write("c.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n{not json\n");
  expect_validation_error([&] { load_corpus(path, Role::test); }, "line 2");
  auto path2 = dir.write("d.jsonl", "[1,2]\n");
  expect_validation_error([&] { load_corpus(path2, Role::test); }, "line 1");
  auto path3 = dir.write("e.jsonl", "{\"id\":7,\"text\":\"x\"}\n");
  expect_validation_error([&] { load_corpus(path3, Role::test); }, "'id'");
}

TEST(LoadCorpus, TextKeptVerbatim) {
  std::istringstream in("{\"id\":\"a\",\"text\":\"  Caf\\u00e9, WOW!  \"}\n");
  Corpus c = parse_corpus(in, Role::test, "mem");
  EXPECT_EQ(c[0].text, "  Caf\xc3\xa9, WOW!  ");
}

TEST(LoadCorpus, RoundTripRandomCorpora) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> alphabet = {"a", "b", " ", "\"", "\\", "\t",
                                             ",", "\xc3\xa9", "z", "{", "}"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Sample> samples;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      Sample s;
      s.id = "id" + std::to_string(i) + alphabet[rng() % 4];
      s.text = "t";
      for (int k = 0; k < static_cast<int>(rng() % 12); ++k) {
        s.text += alphabet[rng() % alphabet.size()];
      }
      if (rng() % 2) s.label = (rng() % 2) ? "pos" : "neg";
      samples.push_back(s);
    }
    Corpus original(Role::train, samples);
    std::stringstream buf;
    write_corpus(buf, original.samples());
    Corpus reloaded = parse_corpus(buf, Role::train, "mem");
    ASSERT_EQ(reloaded.size(), original.size());
    for (std::size_t i = 0; i < original.size(); ++i) {
      EXPECT_EQ(reloaded[i], original[i]);
    }
  }
}

TEST(LoadCorpus, ExportKeepsExtraFields) {
  std::istringstream in("{\"id\":\"a\",\"text\":\"x\",\"source\":\"imdb\"}\n");
  Corpus c = parse_corpus(in, Role::test, "mem");
  EXPECT_EQ(sample_to_record(c[0]), "{\"id\":\"a\",\"text\":\"x\",\"source\":\"imdb\"}");
}

class PredictionsTest : public ::testing::Test {
 protected:
  PredictionsTest()
      : test_(Role::test, {{"a", "first", "pos", {}}, {"b", "second", "neg", {}}}) {}

  std::vector<PredictionRecord> load(const std::string& content) {
    return load_predictions(dir_.write("p.jsonl", content), test_);
  }

  TempDir dir_;
  Corpus test_;
};

TEST_F(PredictionsTest, ExplicitFlag) {
  auto preds = load("{\"id\":\"b\",\"correct\":false}\n{\"id\":\"a\",\"correct\":true}\n");
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(preds[0].id, "a");  // test corpus order
  EXPECT_TRUE(preds[0].correct);
  EXPECT_FALSE(preds[0].confidence.has_value());
  EXPECT_FALSE(preds[1].correct);
}

TEST_F(PredictionsTest, DerivedFromCorpusLabel) {
  auto preds = load(
      "{\"id\":\"a\",\"prediction\":\"pos\",\"confidence\":0.9}\n"
      "{\"id\":\"b\",\"prediction\":\"pos\"}\n");
  EXPECT_TRUE(preds[0].correct);
  EXPECT_DOUBLE_EQ(*preds[0].confidence, 0.9);
  EXPECT_FALSE(preds[1].correct);
}

TEST_F(PredictionsTest, LookupPrecedence) {
  // Explicit flag beats record gold, record gold beats the corpus label.
  auto preds = load(
      "{\"id\":\"a\",\"prediction\":\"neg\",\"gold\":\"neg\",\"correct\":false}\n"
      "{\"id\":\"b\",\"prediction\":\"pos\",\"gold\":\"pos\"}\n");
  EXPECT_FALSE(preds[0].correct);
  EXPECT_TRUE(preds[1].correct);
}

TEST_F(PredictionsTest, MissingRecord) {
  expect_validation_error([&] { load("{\"id\":\"a\",\"correct\":true}\n"); },
                          "missing prediction for 'b'");
}

TEST_F(PredictionsTest, UnknownAndDuplicateIds) {
  expect_validation_error(
      [&] { load("{\"id\":\"a\",\"correct\":true}\n{\"id\":\"q\",\"correct\":true}\n"); },
      "unknown id 'q'");
  expect_validation_error(
      [&] { load("{\"id\":\"a\",\"correct\":true}\n{\"id\":\"a\",\"correct\":true}\n"); },
      "duplicate prediction");
}

TEST_F(PredictionsTest, UnderivableCorrectness) {
  std::vector<std::string> ids = {"a"};
  auto path = dir_.write("q.jsonl", "{\"id\":\"a\",\"prediction\":\"pos\"}\n");
  expect_validation_error([&] { load_predictions(path, ids); },
                          "cannot derive correctness for 'a'");
}

TEST_F(PredictionsTest, ConfidenceOutOfRange) {
  expect_validation_error(
      [&] {
        load("{\"id\":\"a\",\"correct\":true,\"confidence\":1.5}\n"
             "{\"id\":\"b\",\"correct\":true}\n");
      },
      "outside [0,1]");
}

TEST(LoadEmbeddings, ParsesRows) {
  std::istringstream in("#dim 2\na\t1.0 0.0\nb\t-0.5 2e-3\n");
  auto table = parse_embeddings(in, "mem");
  EXPECT_EQ(table.dim(), 2u);
  ASSERT_EQ(table.size(), 2u);
  auto a = table.find("a");
  ASSERT_TRUE(a);
  EXPECT_EQ((*a)[0], 1.0);
  EXPECT_EQ((*a)[1], 0.0);
  EXPECT_EQ((*table.find("b"))[1], 2e-3);
  EXPECT_FALSE(table.find("c"));
}

TEST(LoadEmbeddings, SkipsExporterComments) {
  std::istringstream in("# encoder all-MiniLM-L6-v2\n#dim 2\n# note\na\t1 0\n");
  auto table = parse_embeddings(in, "mem");
  EXPECT_EQ(table.size(), 1u);
}

TEST(LoadEmbeddings, RejectsDeviations) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_embeddings(in, "mem");
  };
  expect_validation_error([&] { parse("#dim 2\na\t1.0 0.0 3.0\n"); }, "row 'a' has 3 values");
  expect_validation_error([&] { parse("#dim 2\na\t1.0 x\n"); }, "at line 2");
  expect_validation_error([&] { parse("#dim 2\na\t1.0 nan\n"); }, "non-finite");
  expect_validation_error([&] { parse("#dim 2\na\t1.0 inf\n"); }, "non-finite");
  expect_validation_error([&] { parse("#dim 2\na\t1 0\na\t0 1\n"); }, "duplicate");
  expect_validation_error([&] { parse("#dim 2\na\t1  0\n"); }, "bad number");
  expect_validation_error([&] { parse("#dim 2\na\t1 0 \n"); }, "bad number");
  expect_validation_error([&] { parse("#dim 2\na 1 0\n"); }, "line 2");
  expect_validation_error([&] { parse("#dim 2\n\n"); }, "line 2");
  expect_validation_error([&] { parse("#dim 0\n"); }, "header");
  expect_validation_error([&] { parse("#dim  2\n"); }, "header");
  expect_validation_error([&] { parse("dim 2\n"); }, "header");
  expect_validation_error([&] { parse(""); }, "header");
}

}  // namespace
}  // namespace datascore
