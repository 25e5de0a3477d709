// tests/ngram-lm-test.cc

// Copyright 2026  The latrescore Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "latrescore/ngram-lm.h"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "latrescore/error.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"
#include "testing/random-lattice.h"

namespace latrescore {
namespace {

using testing::TwoSentenceCorpus;
typedef std::vector<std::string> Words;

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kIoError;
}

std::int64_t Count(const NGramLM &lm, const Words &ctx, const std::string &w) {
  std::vector<WordId> ids;
  for (const std::string &c : ctx) ids.push_back(lm.vocab().Id(c));
  const NGramLM::ContextStats *st = lm.FindContext(ids);
  if (st == nullptr) return 0;
  auto it = st->counts.find(lm.vocab().Id(w));
  return it == st->counts.end() ? 0 : it->second;
}

TEST(VocabularyTest, ReservedTokensAndLookup) {
  Vocabulary v({"b", "a", "<s>", "a", "<unk>"});
  EXPECT_EQ(v.size(), 5);
  EXPECT_EQ(v.Token(Vocabulary::kBosId), "<s>");
  EXPECT_EQ(v.Token(Vocabulary::kEosId), "</s>");
  EXPECT_EQ(v.Token(Vocabulary::kUnkId), "<unk>");
  for (WordId id = 0; id < v.size(); id++) EXPECT_EQ(v.Id(v.Token(id)), id);
  EXPECT_EQ(v.Id("zebra"), Vocabulary::kUnkId);
  EXPECT_FALSE(v.Find("zebra").has_value());
  EXPECT_EQ(v.PredictableIds().size(), 4u);
}

TEST(TrainTest, FixtureCounts) {
  NGramLM bigram = TrainNGram(TwoSentenceCorpus(), 2);
  const NGramLM::ContextStats *a = bigram.FindContext(
      std::vector<WordId>{bigram.vocab().Id("a")});
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->total, 2);
  EXPECT_EQ(a->types(), 2);
  EXPECT_EQ(bigram.vocab().size(), 6);  // <s> </s> <unk> a b c

  NGramLM unigram = TrainNGram(TwoSentenceCorpus(), 1);
  EXPECT_EQ(Count(unigram, {}, "a"), 2);
  EXPECT_EQ(Count(unigram, {}, "b"), 1);
  EXPECT_EQ(Count(unigram, {}, "c"), 1);
  EXPECT_EQ(Count(unigram, {}, "</s>"), 2);
  const NGramLM::ContextStats *root = unigram.FindContext(std::vector<WordId>{});
  ASSERT_NE(root, nullptr);
  EXPECT_EQ(root->total, 6);
  EXPECT_EQ(root->types(), 4);

  NGramLM single = TrainNGram(testing::SplitSentences({"a"}), 1);
  EXPECT_EQ(Count(single, {}, "a"), 1);
  EXPECT_EQ(Count(single, {}, "</s>"), 1);
}

TEST(TrainTest, Errors) {
  EXPECT_EQ(CodeOf([] { TrainNGram(std::vector<Sentence>{}, 2); }),
            ErrorCode::kEmptyCorpus);
  EXPECT_EQ(CodeOf([] { TrainNGram(TwoSentenceCorpus(), 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(TrainTest, MinCountMapsRareWordsToUnk) {
  VocabPolicy policy{VocabPolicy::Kind::kMinCount, 2};
  NGramLM lm = TrainNGram(TwoSentenceCorpus(), 1, policy);
  EXPECT_TRUE(lm.vocab().Find("a").has_value());
  EXPECT_FALSE(lm.vocab().Find("b").has_value());
  EXPECT_EQ(Count(lm, {}, "<unk>"), 2);
  EXPECT_EQ(lm.ScoreWord({}, "b"), lm.ScoreWord({}, "c"));
}

TEST(ScoreWordTest, WittenBellGoldens) {
  NGramLM bigram = TrainNGram(TwoSentenceCorpus(), 2);
  NGramLM unigram = TrainNGram(TwoSentenceCorpus(), 1);
  Words a = {"a"};
  EXPECT_NEAR(std::exp(bigram.ScoreWord(a, "b")), 0.34, 1e-12);
  EXPECT_NEAR(std::exp(unigram.ScoreWord({}, "a")), 0.28, 1e-12);
  EXPECT_NEAR(std::exp(unigram.ScoreWord({}, "b")), 0.18, 1e-12);
  Words unseen = {"z-unseen-context"};
  EXPECT_EQ(bigram.ScoreWord(unseen, "a"), unigram.ScoreWord({}, "a"));
}

TEST(ScoreWordTest, MatchesRecountingOracle) {
  std::mt19937_64 rng(21);
  Words alphabet = {"a", "b", "c", "d", "e"};
  std::vector<Sentence> corpus = testing::RandomCorpus(rng, 30, 6, alphabet);
  Words probe = {"a", "b", "c", "d", "e", "oov", "</s>"};
  for (int order : {1, 2, 3, 4}) {
    NGramLM lm = TrainNGram(corpus, order);
    std::uniform_int_distribution<int> len(0, 5);
    std::uniform_int_distribution<size_t> pick(0, probe.size() - 2);
    for (int trial = 0; trial < 60; trial++) {
      Words ctx;
      for (int i = len(rng); i > 0; i--) ctx.push_back(probe[pick(rng)]);
      for (const std::string &w : probe) {
        double expected = testing::OracleWittenBell(corpus, order, ctx, w);
        EXPECT_NEAR(std::exp(lm.ScoreWord(ctx, w)), expected, 1e-12);
      }
    }
  }
}

TEST(ScoreWordTest, NormalizesOverPredictableVocabulary) {
  std::mt19937_64 rng(22);
  Words alphabet = {"a", "b", "c", "d"};
  NGramLM lm = TrainNGram(testing::RandomCorpus(rng, 40, 5, alphabet), 3);
  Words probe = {"a", "b", "c", "d", "x"};
  std::uniform_int_distribution<size_t> pick(0, probe.size() - 1);
  for (int trial = 0; trial < 200; trial++) {
    Words ctx;
    for (int i = trial % 4; i > 0; i--) ctx.push_back(probe[pick(rng)]);
    double sum = 0.0;
    for (WordId id : lm.vocab().PredictableIds())
      sum += std::exp(lm.ScoreWord(ctx, lm.vocab().Token(id)));
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(ScoreWordTest, SeenBeatsUnseenAndMoreDataHelps) {
  std::vector<Sentence> corpus = testing::SplitSentences({"a b", "a c", "b a"});
  NGramLM lm = TrainNGram(corpus, 2);
  Words a = {"a"};
  // b and c follow "a"; "a" itself never does and has no higher unigram mass
  // advantage large enough to overturn that.
  EXPECT_GT(lm.ScoreWord(a, "b"), lm.ScoreWord(a, "<unk>"));
  EXPECT_GT(lm.ScoreWord(a, "c"), lm.ScoreWord(a, "<unk>"));

  std::vector<Sentence> more = corpus;
  more.push_back({"a", "b"});
  NGramLM lm2 = TrainNGram(more, 2);
  EXPECT_GE(lm2.ScoreWord(a, "b"), lm.ScoreWord(a, "b"));
}

TEST(ScoreWordTest, LongContextsTruncate) {
  NGramLM lm = TrainNGram(TwoSentenceCorpus(), 2);
  EXPECT_EQ(lm.ScoreWord(Words{"c", "b", "a"}, "b"), lm.ScoreWord(Words{"a"}, "b"));
  EXPECT_EQ(lm.HistoryIds(Words{}), std::vector<WordId>{Vocabulary::kBosId});
  EXPECT_EQ(lm.HistoryIds(Words{"b", "a"}),
            std::vector<WordId>{lm.vocab().Id("a")});
  EXPECT_EQ(CodeOf([&] { lm.ScoreWord(Words{}, "<s>"); }),
            ErrorCode::kInvalidArgument);
}

TEST(ScoreSequenceTest, ChainRule) {
  NGramLM lm = TrainNGram(TwoSentenceCorpus(), 2);
  Words a = {"a"};
  EXPECT_NEAR(lm.ScoreSequence(a), lm.ScoreWord({}, "a") + lm.ScoreWord(a, "</s>"),
              1e-12);
  EXPECT_NEAR(lm.ScoreSequence(Words{}), lm.ScoreWord({}, "</s>"), 1e-12);
  Words seq = {"a", "c", "b", "zz"};
  double manual = 0.0;
  for (size_t i = 0; i <= seq.size(); i++) {
    Words ctx(seq.begin(), seq.begin() + i);
    manual += lm.ScoreWord(ctx, i < seq.size() ? seq[i] : "</s>");
  }
  EXPECT_NEAR(lm.ScoreSequence(seq), manual, 1e-9);
}

TEST(PerplexityTest, Examples) {
  NGramLM uniform = NGramLM::Uniform(Vocabulary({"a", "b", "c"}));
  EXPECT_NEAR(Perplexity(uniform, TwoSentenceCorpus()), 5.0, 1e-9);

  NGramLM lm = TrainNGram(TwoSentenceCorpus(), 2);
  std::vector<Sentence> corpus = TwoSentenceCorpus();
  double logprob = 0.0;
  int events = 0;
  for (const Sentence &s : corpus) {
    for (size_t i = 0; i <= s.size(); i++) {
      Words ctx(s.begin(), s.begin() + i);
      logprob += std::log(testing::OracleWittenBell(corpus, 2, ctx,
                                                    i < s.size() ? s[i] : "</s>"));
      events++;
    }
  }
  EXPECT_NEAR(Perplexity(lm, corpus), std::exp(-logprob / events), 1e-9);

  std::vector<Sentence> one = testing::SplitSentences({"b"});
  double p1 = lm.ScoreWord({}, "b"), p2 = lm.ScoreWord(Words{"b"}, "</s>");
  EXPECT_NEAR(Perplexity(lm, one), std::exp(-(p1 + p2) / 2), 1e-12);
  EXPECT_EQ(CodeOf([&] { Perplexity(lm, std::vector<Sentence>{}); }),
            ErrorCode::kEmptyCorpus);
}

TEST(SerializationTest, RoundTrip) {
  std::mt19937_64 rng(23);
  NGramLM lm = TrainNGram(
      testing::RandomCorpus(rng, 20, 5, {"a", "b", "c", "d"}), 3);
  std::ostringstream os;
  lm.Write(os);
  std::istringstream is(os.str());
  NGramLM back = NGramLM::Read(is);
  EXPECT_TRUE(back == lm);
  std::ostringstream again;
  back.Write(again);
  EXPECT_EQ(again.str(), os.str());
  EXPECT_EQ(os.str().rfind("NGLM v1\n", 0), 0u);
}

TEST(SerializationTest, FixtureText) {
  NGramLM lm = TrainNGram(TwoSentenceCorpus(), 1);
  std::ostringstream os;
  lm.Write(os);
  EXPECT_EQ(os.str(),
            "NGLM v1\norder 1\nvocab 6\n<s>\n</s>\n<unk>\na\nb\nc\n"
            "counts 4\n\t</s>\t2\n\ta\t2\n\tb\t1\n\tc\t1\n");
}

TEST(SerializationTest, RejectsMalformed) {
  for (std::string text :
       {std::string("NGLM v2\n"), std::string("NGLM v1\norder 0\n"),
        std::string("NGLM v1\norder 1\nvocab 3\n<s>\n</s>\n<unk>\ncounts 1\n\tq\t1\n"),
        std::string("NGLM v1\norder 1\nvocab 3\n<s>\n</s>\n<unk>\ncounts 1\n\t</s>\t-1\n"),
        std::string("NGLM v1\norder 1\nvocab 3\n<s>\n</s>\n<unk>\ncounts 2\n\t</s>\t1\n")}) {
    std::istringstream is(text);
    EXPECT_THROW(NGramLM::Read(is), Error) << text;
  }
}

TEST(CorpusTest, ReadCorpus) {
  std::istringstream is("a b\n\n  c   d \n");
  std::vector<Sentence> s = ReadCorpus(is);
  ASSERT_GE(s.size(), 2u);
  EXPECT_EQ(s.front(), (Words{"a", "b"}));
  EXPECT_EQ(s.back(), (Words{"c", "d"}));
}

}  // namespace
}  // namespace latrescore
