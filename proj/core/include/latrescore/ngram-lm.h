// latrescore/ngram-lm.h

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

#ifndef LATRESCORE_NGRAM_LM_H_
#define LATRESCORE_NGRAM_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace latrescore {

typedef std::int32_t WordId;
typedef std::vector<std::string> Sentence;

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

/// Closed vocabulary.  Ids 0, 1, 2 are <s>, </s>, <unk>; ordinary words
/// follow in sorted order.
class Vocabulary {
 public:
  Vocabulary();
  /// Reserved tokens in `words` are ignored; duplicates are merged.
  explicit Vocabulary(const std::vector<std::string> &words);

  static constexpr WordId kBosId = 0;
  static constexpr WordId kEosId = 1;
  static constexpr WordId kUnkId = 2;

  /// Id of token, or kUnkId for out-of-vocabulary tokens.
  WordId Id(std::string_view token) const;
  std::optional<WordId> Find(std::string_view token) const;
  const std::string &Token(WordId id) const { return tokens_[id]; }
  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  /// Ids that can be predicted: everything but <s>.
  std::vector<WordId> PredictableIds() const;

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, WordId, std::less<>> index_;
};

/// Scoring contract shared by the n-gram model and external scorers.
///
/// `context` is the sentence prefix preceding the predicted word, without
/// <s>; implementations condition on the sentence start themselves.
/// Implementations must be safe for concurrent const use unless documented
/// otherwise.
class LmScorer {
 public:
  virtual ~LmScorer() = default;

  /// Natural-log probability of `word` after `context`.
  virtual double ScoreWord(std::span<const std::string> context,
                           std::string_view word) const = 0;

  virtual std::vector<double> ScoreCandidates(
      std::span<const std::string> context,
      std::span<const std::string> candidates) const;

  /// Chain rule over the words plus the final </s> event.
  virtual double ScoreSequence(std::span<const std::string> words) const;
};

/// Interpolated Witten-Bell n-gram model.
///
/// The level-0 distribution is uniform over the vocabulary minus <s>.  For a
/// context c observed C(c) times with T(c) distinct continuations,
///   P(w|c) = (count(c, w) + T(c) * P(w|c')) / (C(c) + T(c)),
/// where c' drops the oldest word of c.  Unseen contexts use P(w|c')
/// directly.  The model is immutable and thread-safe once built.
class NGramLM : public LmScorer {
 public:
  struct ContextStats {
    std::int64_t total = 0;
    std::map<WordId, std::int64_t> counts;

    std::int64_t types() const {
      return static_cast<std::int64_t>(counts.size());
    }
    bool operator==(const ContextStats &other) const = default;
  };
  // Contexts are word-id tuples of length 0..order-1, oldest word first.
  typedef std::map<std::vector<WordId>, ContextStats> ContextMap;

  NGramLM(int order, Vocabulary vocab, ContextMap contexts);

  /// A model without counts: uniform over the predictable vocabulary.
  static NGramLM Uniform(Vocabulary vocab, int order = 1);

  int order() const { return order_; }
  const Vocabulary &vocab() const { return vocab_; }
  const ContextMap &contexts() const { return contexts_; }

  /// Probability of `word` given a context of at most order-1 ids (longer
  /// contexts are truncated to their most recent ids).  Throws
  /// kInvalidArgument for <s>.
  double Prob(std::span<const WordId> context, WordId word) const;

  const ContextStats *FindContext(std::span<const WordId> context) const;

  double ScoreWord(std::span<const std::string> context,
                   std::string_view word) const override;

  /// Maps a sentence prefix to the conditioning ids: <s> then the words,
  /// truncated to the last order-1 tokens.
  std::vector<WordId> HistoryIds(std::span<const std::string> context) const;

  /// Text serialization: "NGLM v1", order, vocabulary block, then one
  /// `context<TAB>word<TAB>count` line per count.  Read(Write(m)) == m and
  /// Write(Read(text)) == text for text produced by Write.
  void Write(std::ostream &os) const;
  static NGramLM Read(std::istream &is);
  void WriteFile(const std::string &path) const;
  static NGramLM ReadFile(const std::string &path);

  bool operator==(const NGramLM &other) const {
    return order_ == other.order_ && vocab_ == other.vocab_ &&
           contexts_ == other.contexts_;
  }

 private:
  int order_;
  Vocabulary vocab_;
  ContextMap contexts_;
  double uniform_;
};

struct VocabPolicy {
  enum class Kind { kClosed, kMinCount };
  Kind kind = Kind::kClosed;
  // Under kMinCount, words seen fewer times map to <unk>.
  std::int64_t min_count = 1;
};

/// Counts every event of every sentence at all orders 1..order, with <s>
/// histories and an explicit </s> event per sentence.  Throws kEmptyCorpus.
NGramLM TrainNGram(std::span<const Sentence> corpus, int order,
                   VocabPolicy policy = {});

/// exp(-sum of sentence log-probs / number of events incl. </s>).
/// Throws kEmptyCorpus.
double Perplexity(const LmScorer &lm, std::span<const Sentence> corpus);

/// One sentence per line, whitespace-tokenized; blank lines are skipped.
std::vector<Sentence> ReadCorpus(std::istream &is);
std::vector<Sentence> ReadCorpusFile(const std::string &path);

}  // namespace latrescore

#endif  // LATRESCORE_NGRAM_LM_H_
