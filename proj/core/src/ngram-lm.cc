// core/src/ngram-lm.cc

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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "latrescore/error.h"

namespace latrescore {

namespace {

std::vector<std::string> SplitWhitespace(const std::string &line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool IsReserved(std::string_view tok) {
  return tok == kBos || tok == kEos || tok == kUnk;
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string> &words) {
  tokens_ = {std::string(kBos), std::string(kEos), std::string(kUnk)};
  std::vector<std::string> rest;
  for (const std::string &w : words)
    if (!IsReserved(w)) rest.push_back(w);
  std::sort(rest.begin(), rest.end());
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
  tokens_.insert(tokens_.end(), rest.begin(), rest.end());
  for (WordId i = 0; i < size(); i++) index_.emplace(tokens_[i], i);
}

WordId Vocabulary::Id(std::string_view token) const {
  return Find(token).value_or(kUnkId);
}

std::optional<WordId> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<WordId> Vocabulary::PredictableIds() const {
  std::vector<WordId> ids;
  for (WordId i = 0; i < size(); i++)
    if (i != kBosId) ids.push_back(i);
  return ids;
}

std::vector<double> LmScorer::ScoreCandidates(
    std::span<const std::string> context,
    std::span<const std::string> candidates) const {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const std::string &c : candidates) out.push_back(ScoreWord(context, c));
  return out;
}

double LmScorer::ScoreSequence(std::span<const std::string> words) const {
  double total = 0.0;
  for (size_t i = 0; i < words.size(); i++)
    total += ScoreWord(words.first(i), words[i]);
  return total + ScoreWord(words, kEos);
}

NGramLM::NGramLM(int order, Vocabulary vocab, ContextMap contexts)
    : order_(order), vocab_(std::move(vocab)), contexts_(std::move(contexts)) {
  if (order_ < 1)
    throw Error(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  uniform_ = 1.0 / (vocab_.size() - 1);
  for (const auto &[ctx, stats] : contexts_) {
    if (static_cast<int>(ctx.size()) >= order_)
      throw Error(ErrorCode::kInvalidArgument, "context longer than order-1");
    std::int64_t total = 0;
    for (const auto &[w, c] : stats.counts) {
      if (w <= Vocabulary::kBosId || w >= vocab_.size() || c <= 0)
        throw Error(ErrorCode::kInvalidArgument, "bad count entry");
      total += c;
    }
    if (total != stats.total)
      throw Error(ErrorCode::kInvalidArgument, "inconsistent context total");
  }
}

NGramLM NGramLM::Uniform(Vocabulary vocab, int order) {
  return NGramLM(order, std::move(vocab), {});
}

const NGramLM::ContextStats *NGramLM::FindContext(
    std::span<const WordId> context) const {
  auto it = contexts_.find(std::vector<WordId>(context.begin(), context.end()));
  return it == contexts_.end() ? nullptr : &it->second;
}

double NGramLM::Prob(std::span<const WordId> context, WordId word) const {
  if (word == Vocabulary::kBosId || word < 0 || word >= vocab_.size())
    throw Error(ErrorCode::kInvalidArgument,
                "word id " + std::to_string(word) + " cannot be predicted");
  const size_t max_len = static_cast<size_t>(order_ - 1);
  if (context.size() > max_len) context = context.last(max_len);
  double p = uniform_;
  for (size_t len = 0; len <= context.size(); len++) {
    const ContextStats *stats = FindContext(context.last(len));
    if (stats == nullptr) continue;
    auto it = stats->counts.find(word);
    double count = it == stats->counts.end() ? 0.0 : it->second;
    double types = static_cast<double>(stats->types());
    p = (count + types * p) / (static_cast<double>(stats->total) + types);
  }
  return p;
}

std::vector<WordId> NGramLM::HistoryIds(
    std::span<const std::string> context) const {
  std::vector<WordId> ids;
  ids.reserve(context.size() + 1);
  ids.push_back(Vocabulary::kBosId);
  for (const std::string &w : context) ids.push_back(vocab_.Id(w));
  const size_t max_len = static_cast<size_t>(order_ - 1);
  if (ids.size() > max_len) ids.erase(ids.begin(), ids.end() - max_len);
  return ids;
}

double NGramLM::ScoreWord(std::span<const std::string> context,
                          std::string_view word) const {
  std::vector<WordId> history = HistoryIds(context);
  return std::log(Prob(history, vocab_.Id(word)));
}

void NGramLM::Write(std::ostream &os) const {
  os << "NGLM v1\n";
  os << "order " << order_ << '\n';
  os << "vocab " << vocab_.size() << '\n';
  for (const std::string &tok : vocab_.tokens()) os << tok << '\n';
  size_t num_counts = 0;
  for (const auto &[ctx, stats] : contexts_) num_counts += stats.counts.size();
  os << "counts " << num_counts << '\n';
  for (const auto &[ctx, stats] : contexts_) {
    std::string ctx_text;
    for (size_t i = 0; i < ctx.size(); i++) {
      if (i > 0) ctx_text += ' ';
      ctx_text += vocab_.Token(ctx[i]);
    }
    for (const auto &[w, c] : stats.counts)
      os << ctx_text << '\t' << vocab_.Token(w) << '\t' << c << '\n';
  }
}

NGramLM NGramLM::Read(std::istream &is) {
  int line_no = 0;
  std::string line;
  auto next_line = [&](const char *what) {
    if (!std::getline(is, line))
      throw ParseError(line_no + 1, std::string("unexpected end of model, "
                                                "expected ") + what);
    line_no++;
  };
  auto parse_int = [&](std::string_view text, std::int64_t *out) {
    auto res = std::from_chars(text.data(), text.data() + text.size(), *out);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw ParseError(line_no, "bad integer '" + std::string(text) + "'");
  };
  auto keyword_value = [&](std::string_view keyword) {
    std::string prefix = std::string(keyword) + " ";
    if (line.rfind(prefix, 0) != 0)
      throw ParseError(line_no, "expected '" + std::string(keyword) + " N'");
    std::int64_t value = 0;
    parse_int(std::string_view(line).substr(prefix.size()), &value);
    return value;
  };

  next_line("header");
  if (line != "NGLM v1") throw ParseError(line_no, "expected 'NGLM v1'");
  next_line("order");
  std::int64_t order = keyword_value("order");
  if (order < 1) throw ParseError(line_no, "order must be >= 1");
  next_line("vocab");
  std::int64_t vocab_size = keyword_value("vocab");
  std::vector<std::string> tokens;
  for (std::int64_t i = 0; i < vocab_size; i++) {
    next_line("vocabulary token");
    if (line.empty() || line.find_first_of(" \t") != std::string::npos)
      throw ParseError(line_no, "bad vocabulary token");
    tokens.push_back(line);
  }
  Vocabulary vocab(tokens);
  if (vocab.tokens() != tokens)
    throw ParseError(line_no, "vocabulary block is not in canonical order");

  next_line("counts");
  std::int64_t num_counts = keyword_value("counts");
  ContextMap contexts;
  for (std::int64_t i = 0; i < num_counts; i++) {
    next_line("count line");
    size_t tab1 = line.find('\t');
    size_t tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw ParseError(line_no, "expected context<TAB>word<TAB>count");
    std::vector<WordId> ctx;
    for (const std::string &tok : SplitWhitespace(line.substr(0, tab1))) {
      auto id = vocab.Find(tok);
      if (!id) throw ParseError(line_no, "unknown token '" + tok + "'");
      ctx.push_back(*id);
    }
    if (static_cast<std::int64_t>(ctx.size()) >= order)
      throw ParseError(line_no, "context longer than order-1");
    std::string word = line.substr(tab1 + 1, tab2 - tab1 - 1);
    auto wid = vocab.Find(word);
    if (!wid || *wid == Vocabulary::kBosId)
      throw ParseError(line_no, "bad predicted word '" + word + "'");
    std::int64_t count = 0;
    parse_int(std::string_view(line).substr(tab2 + 1), &count);
    if (count <= 0) throw ParseError(line_no, "count must be positive");
    ContextStats &stats = contexts[ctx];
    if (!stats.counts.emplace(*wid, count).second)
      throw ParseError(line_no, "duplicate count entry");
    stats.total += count;
  }
  if (std::getline(is, line))
    throw ParseError(line_no + 1, "trailing content after counts");
  return NGramLM(static_cast<int>(order), std::move(vocab),
                 std::move(contexts));
}

void NGramLM::WriteFile(const std::string &path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path);
  Write(os);
  if (!os) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

NGramLM NGramLM::ReadFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return Read(is);
}

NGramLM TrainNGram(std::span<const Sentence> corpus, int order,
                   VocabPolicy policy) {
  if (corpus.empty())
    throw Error(ErrorCode::kEmptyCorpus, "training corpus is empty");
  if (order < 1)
    throw Error(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");

  std::map<std::string, std::int64_t> word_counts;
  for (const Sentence &s : corpus)
    for (const std::string &w : s) word_counts[w]++;
  std::vector<std::string> words;
  for (const auto &[w, c] : word_counts) {
    if (policy.kind == VocabPolicy::Kind::kMinCount && c < policy.min_count)
      continue;
    words.push_back(w);
  }
  Vocabulary vocab(words);

  NGramLM::ContextMap contexts;
  std::vector<WordId> ids;
  for (const Sentence &s : corpus) {
    ids.assign(1, Vocabulary::kBosId);
    for (const std::string &w : s) ids.push_back(vocab.Id(w));
    ids.push_back(Vocabulary::kEosId);
    for (size_t i = 1; i < ids.size(); i++) {
      size_t max_len = std::min(static_cast<size_t>(order - 1), i);
      for (size_t len = 0; len <= max_len; len++) {
        std::vector<WordId> ctx(ids.begin() + (i - len), ids.begin() + i);
        NGramLM::ContextStats &stats = contexts[std::move(ctx)];
        stats.counts[ids[i]]++;
        stats.total++;
      }
    }
  }
  return NGramLM(order, std::move(vocab), std::move(contexts));
}

double Perplexity(const LmScorer &lm, std::span<const Sentence> corpus) {
  if (corpus.empty())
    throw Error(ErrorCode::kEmptyCorpus, "evaluation corpus is empty");
  double log_prob = 0.0;
  std::int64_t events = 0;
  for (const Sentence &s : corpus) {
    log_prob += lm.ScoreSequence(s);
    events += static_cast<std::int64_t>(s.size()) + 1;
  }
  return std::exp(-log_prob / static_cast<double>(events));
}

std::vector<Sentence> ReadCorpus(std::istream &is) {
  std::vector<Sentence> corpus;
  std::string line;
  while (std::getline(is, line)) {
    Sentence s = SplitWhitespace(line);
    if (!s.empty()) corpus.push_back(std::move(s));
  }
  return corpus;
}

std::vector<Sentence> ReadCorpusFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return ReadCorpus(is);
}

}  // namespace latrescore
