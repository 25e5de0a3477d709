// core/src/scorer-client.cc

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

#include "latrescore/scorer-client.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include "json.hpp"
#include "latrescore/error.h"
#include "latrescore/rescore.h"

namespace latrescore {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void Unavailable(const std::string &msg) {
  throw Error(ErrorCode::kScorerUnavailable, msg);
}

std::vector<std::string> StringArray(const ordered_json &j, const char *field) {
  if (!j.contains(field)) throw Error(ErrorCode::kInvalidArgument,
                                      std::string("missing \"") + field + '"');
  const ordered_json &v = j.at(field);
  if (!v.is_array())
    throw Error(ErrorCode::kInvalidArgument,
                std::string("\"") + field + "\" must be an array");
  std::vector<std::string> out;
  for (const auto &e : v) {
    if (!e.is_string())
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("\"") + field + "\" must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

namespace protocol {

std::string HelloLine(int vocab_size) {
  ordered_json j;
  j["op"] = "hello";
  j["protocol"] = kScorerProtocolVersion;
  j["vocab_size"] = vocab_size;
  return j.dump();
}

std::string RequestLine(const NeuralScoreBatch &batch) {
  ordered_json j;
  j["id"] = batch.id;
  j["op"] = "score";
  j["context"] = batch.context;
  j["candidates"] = batch.candidates;
  return j.dump();
}

std::string ResponseLine(const NeuralScoreBatch &batch) {
  ordered_json j;
  j["id"] = batch.id;
  j["logprobs"] = batch.logprobs;
  return j.dump();
}

std::string ErrorLine(const std::string &id, const std::string &reason) {
  ordered_json j;
  j["id"] = id;
  j["error"] = reason;
  return j.dump();
}

int ParseHello(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    Unavailable("handshake is not a JSON object");
  if (j.value("op", "") != "hello") Unavailable("handshake lacks op=hello");
  if (!j.contains("protocol") || !j["protocol"].is_number_integer() ||
      j["protocol"].get<int>() != kScorerProtocolVersion)
    Unavailable("unsupported scorer protocol");
  if (!j.contains("vocab_size") || !j["vocab_size"].is_number_integer() ||
      j["vocab_size"].get<long>() <= 0)
    Unavailable("handshake lacks a positive vocab_size");
  return j["vocab_size"].get<int>();
}

NeuralScoreBatch ParseRequest(std::string_view line, std::string *id_out) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::kInvalidArgument, "request is not a JSON object");
  NeuralScoreBatch batch;
  if (j.contains("id") && j["id"].is_string()) {
    batch.id = j["id"].get<std::string>();
    if (id_out != nullptr) *id_out = batch.id;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "missing string \"id\"");
  }
  if (j.value("op", "") != "score")
    throw Error(ErrorCode::kInvalidArgument, "unsupported op");
  batch.context = StringArray(j, "context");
  batch.candidates = StringArray(j, "candidates");
  if (batch.candidates.empty())
    throw Error(ErrorCode::kInvalidArgument, "\"candidates\" is empty");
  return batch;
}

Response ParseResponse(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    Unavailable("malformed scorer response: " + std::string(line));
  if (!j.contains("id") || !j["id"].is_string())
    Unavailable("scorer response without id");
  Response r;
  r.id = j["id"].get<std::string>();
  if (j.contains("error")) {
    r.error = j["error"].is_string() ? j["error"].get<std::string>()
                                     : j["error"].dump();
    return r;
  }
  if (!j.contains("logprobs") || !j["logprobs"].is_array())
    Unavailable("scorer response without logprobs");
  for (const auto &v : j["logprobs"]) {
    if (!v.is_number()) Unavailable("non-numeric logprob");
    r.logprobs.push_back(v.get<double>());
  }
  return r;
}

}  // namespace protocol

ExternalScorer::ExternalScorer(const std::string &command,
                               std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  // A scorer that dies mid-write must surface as an error, not a signal.
  signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) Unavailable("pipe() failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    Unavailable("pipe() failed");
  }
  pid_ = fork();
  if (pid_ < 0) Unavailable("fork() failed");
  if (pid_ == 0) {
    // Own process group, so a shell's children can be killed with it.
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  setpgid(pid_, pid_);
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  try {
    vocab_size_ = protocol::ParseHello(ReadLine());
  } catch (...) {
    Shutdown();
    throw;
  }
}

ExternalScorer::~ExternalScorer() { Shutdown(); }

void ExternalScorer::Shutdown() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ <= 0) return;
  // Closing stdin asks the scorer to exit; give it a moment before killing.
  for (int i = 0; i < 100; i++) {
    if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  if (kill(-pid_, SIGKILL) != 0) kill(pid_, SIGKILL);
  waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

std::string ExternalScorer::ReadLine() const {
  auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) Unavailable("scorer timed out");
    pollfd pfd{from_child_, POLLIN, 0};
    int rc = poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      Unavailable(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) Unavailable("scorer timed out");
    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      Unavailable(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) Unavailable("scorer closed its output");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

void ExternalScorer::WriteLine(const std::string &line) const {
  std::string data = line + '\n';
  size_t done = 0;
  while (done < data.size()) {
    ssize_t n = write(to_child_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      Unavailable(std::string("write to scorer failed: ") +
                  std::strerror(errno));
    }
    done += static_cast<size_t>(n);
  }
}

NeuralScoreBatch ExternalScorer::Score(
    std::span<const std::string> context,
    std::span<const std::string> candidates) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (to_child_ < 0) Unavailable("scorer connection is closed");
  NeuralScoreBatch batch;
  batch.id = "r" + std::to_string(next_id_++);
  batch.context.assign(context.begin(), context.end());
  batch.candidates.assign(candidates.begin(), candidates.end());
  WriteLine(protocol::RequestLine(batch));

  protocol::Response response;
  auto stray = stray_.find(batch.id);
  if (stray != stray_.end()) {
    response = std::move(stray->second);
    stray_.erase(stray);
  } else {
    while (true) {
      response = protocol::ParseResponse(ReadLine());
      if (response.id == batch.id) break;
      stray_[response.id] = std::move(response);
    }
  }
  if (response.error)
    Unavailable("scorer rejected request " + batch.id + ": " +
                *response.error);
  if (response.logprobs.size() != batch.candidates.size())
    Unavailable("scorer returned " + std::to_string(response.logprobs.size()) +
                " scores for " + std::to_string(batch.candidates.size()) +
                " candidates");
  try {
    batch.logprobs =
        ConvertNeuralScores(response.logprobs, ScoreKind::kLogProbability);
  } catch (const Error &e) {
    Unavailable(std::string("invalid scorer output: ") + e.what());
  }
  return batch;
}

double ExternalScorer::ScoreWord(std::span<const std::string> context,
                                 std::string_view word) const {
  std::string candidate(word);
  return Score(context, std::span<const std::string>(&candidate, 1))
      .logprobs[0];
}

std::vector<double> ExternalScorer::ScoreCandidates(
    std::span<const std::string> context,
    std::span<const std::string> candidates) const {
  return Score(context, candidates).logprobs;
}

}  // namespace latrescore
