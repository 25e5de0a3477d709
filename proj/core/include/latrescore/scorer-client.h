// latrescore/scorer-client.h

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

// Client side of the external scorer protocol: line-delimited JSON over the
// stdin/stdout of a spawned process.
//
//   scorer -> client (first line)  {"op":"hello","protocol":1,"vocab_size":V}
//   client -> scorer               {"id":"r1","op":"score",
//                                   "context":[...],"candidates":[...]}
//   scorer -> client               {"id":"r1","logprobs":[...]}
//                               or {"id":"r1","error":"reason"}
//
// Responses are matched to requests by id.  A malformed line, an early exit
// or a silence longer than the timeout raises kScorerUnavailable.

#ifndef LATRESCORE_SCORER_CLIENT_H_
#define LATRESCORE_SCORER_CLIENT_H_

#include <sys/types.h>

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latrescore/ngram-lm.h"

namespace latrescore {

inline constexpr int kScorerProtocolVersion = 1;
inline constexpr std::chrono::milliseconds kScorerTimeout{30000};

struct NeuralScoreBatch {
  std::string id;
  std::vector<std::string> context;
  std::vector<std::string> candidates;
  std::vector<double> logprobs;  // aligned with candidates
};

namespace protocol {

std::string HelloLine(int vocab_size);
std::string RequestLine(const NeuralScoreBatch &batch);
std::string ResponseLine(const NeuralScoreBatch &batch);
std::string ErrorLine(const std::string &id, const std::string &reason);

/// Returns the advertised vocabulary size.  Throws kScorerUnavailable.
int ParseHello(std::string_view line);

/// Parses a request line into id/context/candidates.  Throws
/// kInvalidArgument describing what is wrong; the id is recovered into
/// *id_out whenever present so the server can address its error reply.
NeuralScoreBatch ParseRequest(std::string_view line, std::string *id_out);

struct Response {
  std::string id;
  std::optional<std::string> error;
  std::vector<double> logprobs;
};

/// Throws kScorerUnavailable on malformed JSON or missing fields.
Response ParseResponse(std::string_view line);

}  // namespace protocol

/// An LmScorer backed by an external process.  Requests on one connection
/// are serialized; use one instance per thread for parallelism.
class ExternalScorer : public LmScorer {
 public:
  /// Spawns `command` through /bin/sh and completes the handshake.
  explicit ExternalScorer(const std::string &command,
                          std::chrono::milliseconds timeout = kScorerTimeout);
  ~ExternalScorer() override;

  ExternalScorer(const ExternalScorer &) = delete;
  ExternalScorer &operator=(const ExternalScorer &) = delete;

  int vocab_size() const { return vocab_size_; }

  /// One round trip; the returned batch has validated log-probabilities.
  NeuralScoreBatch Score(std::span<const std::string> context,
                         std::span<const std::string> candidates) const;

  double ScoreWord(std::span<const std::string> context,
                   std::string_view word) const override;
  std::vector<double> ScoreCandidates(
      std::span<const std::string> context,
      std::span<const std::string> candidates) const override;

 private:
  std::string ReadLine() const;
  void WriteLine(const std::string &line) const;
  void Shutdown();

  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  int vocab_size_ = 0;

  mutable std::mutex mu_;
  mutable std::string buffer_;
  mutable long next_id_ = 1;
  mutable std::map<std::string, protocol::Response> stray_;
};

}  // namespace latrescore

#endif  // LATRESCORE_SCORER_CLIENT_H_
