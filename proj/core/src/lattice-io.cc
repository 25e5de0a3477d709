// core/src/lattice-io.cc

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

#include "latrescore/lattice-io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "latrescore/error.h"
#include "latrescore/lattice-algo.h"

namespace latrescore {

namespace {

constexpr StateId kMaxStateId = 100000000;

std::vector<std::string_view> SplitFields(std::string_view line,
                                          std::string_view seps = " \t") {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos < line.size()) {
    size_t start = line.find_first_not_of(seps, pos);
    if (start == std::string_view::npos) break;
    size_t end = line.find_first_of(seps, start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

std::vector<std::string_view> SplitExact(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
}

// Lines of a newline-terminated text.
std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines = SplitExact(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

StateId ParseState(std::string_view tok, int line) {
  StateId v = -1;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 0 ||
      v > kMaxStateId)
    throw ParseError(line, "bad state id '" + std::string(tok) + "'");
  return v;
}

double ParseCost(std::string_view tok, int line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() ||
      res.ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(line, "bad cost '" + std::string(tok) + "'");
  return v;
}

// Internal scores are negated costs; keep +0.0 for zero costs.
double CostToScore(double cost) { return cost == 0.0 ? 0.0 : -cost; }

const char *AmToken(AmKind kind) {
  switch (kind) {
    case AmKind::kDnn: return "DNN";
    case AmKind::kGmm: return "GMM";
    case AmKind::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const char *AlignToken(AlignmentKind kind) {
  switch (kind) {
    case AlignmentKind::kPhoneThenWord: return "phone-word";
    case AlignmentKind::kDirectWord: return "word";
    case AlignmentKind::kUnknown: return "unknown";
  }
  return "unknown";
}

void ParseMeta(std::string_view rest, int line, LatticeMeta *meta) {
  for (std::string_view kv : SplitFields(rest)) {
    size_t eq = kv.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line, "bad meta field '" + std::string(kv) + "'");
    std::string_view key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "am") {
      if (value == "DNN") meta->am_kind = AmKind::kDnn;
      else if (value == "GMM") meta->am_kind = AmKind::kGmm;
      else if (value == "UNKNOWN") meta->am_kind = AmKind::kUnknown;
      else throw ParseError(line, "unknown am kind '" + std::string(value) + "'");
    } else if (key == "align") {
      if (value == "phone-word") meta->alignment_kind = AlignmentKind::kPhoneThenWord;
      else if (value == "word") meta->alignment_kind = AlignmentKind::kDirectWord;
      else if (value == "unknown") meta->alignment_kind = AlignmentKind::kUnknown;
      else throw ParseError(line, "unknown alignment kind '" + std::string(value) + "'");
    } else {
      throw ParseError(line, "unknown meta key '" + std::string(key) + "'");
    }
  }
}

bool HasWhitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return is;
}

std::string ReadAll(const std::string &path) {
  std::ifstream is = OpenInput(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

std::string FormatCost(double cost) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", cost);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

Lattice ParseLatticeText(std::string_view text, bool validate,
                         int first_line) {
  std::vector<std::string_view> lines = SplitExact(text, '\n');
  const int offset = first_line - 1;
  LatticeMeta meta;
  std::vector<Arc> arcs;
  std::map<StateId, double> finals;
  std::optional<StateId> start;
  StateId max_state = -1;
  bool terminated = false;
  size_t i = 0;

  for (; i < lines.size(); i++) {
    const int line_no = static_cast<int>(i) + 1 + offset;
    std::string_view line = lines[i];
    if (line.find('\r') != std::string_view::npos)
      throw ParseError(line_no, "carriage return in input (LF line endings required)");
    if (i == 0) {
      if (line.empty() || HasWhitespace(line) || line[0] == '#')
        throw ParseError(line_no, "expected an utterance id");
      meta.utterance_id = std::string(line);
      continue;
    }
    if (line.empty()) {
      // The final split element after a trailing newline is not a line.
      if (i + 1 == lines.size()) break;
      terminated = true;
      i++;
      break;
    }
    if (line[0] == '#') {
      std::string_view body = line.substr(1);
      size_t p = body.find_first_not_of(" \t");
      if (p != std::string_view::npos && body.substr(p).rfind("meta:", 0) == 0)
        ParseMeta(body.substr(p + 5), line_no, &meta);
      continue;
    }
    std::vector<std::string_view> fields = SplitFields(line);
    if (fields.size() == 4) {
      Arc arc;
      arc.from = ParseState(fields[0], line_no);
      arc.to = ParseState(fields[1], line_no);
      arc.word = std::string(fields[2]);
      std::vector<std::string_view> costs = SplitExact(fields[3], ',');
      if (costs.size() != 2 && costs.size() != 3)
        throw ParseError(line_no, "expected graph_cost,acoustic_cost[,phones]");
      arc.lm_score = CostToScore(ParseCost(costs[0], line_no));
      arc.acoustic_score = CostToScore(ParseCost(costs[1], line_no));
      if (costs.size() == 3) {
        for (std::string_view phone : SplitExact(costs[2], '_')) {
          if (phone.empty()) throw ParseError(line_no, "empty phone label");
          arc.phones.emplace_back(phone);
        }
      }
      if (!start) start = arc.from;
      max_state = std::max({max_state, arc.from, arc.to});
      arcs.push_back(std::move(arc));
    } else if (fields.size() == 1 || fields.size() == 2) {
      StateId s = ParseState(fields[0], line_no);
      double cost = fields.size() == 2 ? ParseCost(fields[1], line_no) : 0.0;
      if (!finals.emplace(s, CostToScore(cost)).second)
        throw ParseError(line_no, "duplicate final state " + std::to_string(s));
      max_state = std::max(max_state, s);
    } else {
      throw ParseError(line_no, "expected an arc line (4 fields) or a final "
                                "line (1-2 fields), got " +
                                    std::to_string(fields.size()) + " fields");
    }
  }
  const int end_line = static_cast<int>(lines.size()) + offset;
  if (meta.utterance_id.empty()) throw ParseError(first_line, "empty input");
  if (!terminated)
    throw ParseError(end_line, "truncated lattice: missing blank-line terminator");
  for (; i < lines.size(); i++) {
    if (!lines[i].empty())
      throw ParseError(static_cast<int>(i) + 1 + offset,
                       "unexpected content after lattice terminator");
  }
  if (!start) {
    if (finals.empty())
      throw ParseError(first_line, "lattice has neither arcs nor final states");
    start = finals.begin()->first;
  }
  Lattice lat(max_state + 1, *start, std::move(finals), std::move(arcs),
              std::move(meta));
  if (validate) {
    ValidationReport report = Validate(lat);
    if (!report.ok())
      throw Error(ErrorCode::kValidationError,
                  "lattice '" + lat.meta().utterance_id +
                      "': " + report.ToString());
  }
  return lat;
}

std::string WriteLatticeText(const Lattice &lat) {
  const std::string &id = lat.meta().utterance_id;
  if (id.empty() || HasWhitespace(id) || id[0] == '#')
    throw Error(ErrorCode::kInvalidArgument,
                "utterance id '" + id + "' cannot be written");
  std::vector<Arc> arcs = lat.SortedArcs();
  std::stable_partition(arcs.begin(), arcs.end(), [&](const Arc &a) {
    return a.from == lat.start();
  });
  if (arcs.empty() && !lat.IsFinal(lat.start()))
    throw Error(ErrorCode::kInvalidArgument,
                "start state of '" + id + "' cannot be represented");
  std::string out;
  out += id;
  out += '\n';
  out += "# meta: am=";
  out += AmToken(lat.meta().am_kind);
  out += " align=";
  out += AlignToken(lat.meta().alignment_kind);
  out += '\n';
  for (const Arc &arc : arcs) {
    out += std::to_string(arc.from) + ' ' + std::to_string(arc.to) + ' ' +
           arc.word + ' ' + FormatCost(-arc.lm_score) + ',' +
           FormatCost(-arc.acoustic_score);
    if (!arc.phones.empty()) {
      out += ',';
      for (size_t i = 0; i < arc.phones.size(); i++) {
        if (i > 0) out += '_';
        out += arc.phones[i];
      }
    }
    out += '\n';
  }
  std::vector<std::pair<StateId, double>> finals(lat.finals().begin(),
                                                 lat.finals().end());
  if (arcs.empty()) {
    // The start state is the first final line when there are no arcs.
    std::stable_partition(finals.begin(), finals.end(),
                          [&](const auto &f) { return f.first == lat.start(); });
  }
  for (const auto &[s, score] : finals)
    out += std::to_string(s) + ' ' + FormatCost(-score) + '\n';
  out += '\n';
  return out;
}

const ScpEntry *ScpIndex::Find(std::string_view key) const {
  for (const ScpEntry &e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

ScpIndex ParseScp(std::string_view text) {
  ScpIndex index;
  std::set<std::string> keys;
  std::map<std::string, std::uint64_t> last_offset;
  std::vector<std::string_view> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); i++) {
    const int line_no = static_cast<int>(i) + 1;
    std::string_view line = lines[i];
    if (line.empty()) continue;
    std::vector<std::string_view> fields = SplitFields(line);
    if (fields.size() != 2)
      throw ParseError(line_no, "expected key<TAB>ark_path:byte_offset");
    size_t colon = fields[1].rfind(':');
    if (colon == std::string_view::npos || colon == 0)
      throw ParseError(line_no, "expected ark_path:byte_offset");
    ScpEntry entry;
    entry.key = std::string(fields[0]);
    entry.ark_path = std::string(fields[1].substr(0, colon));
    std::string_view off = fields[1].substr(colon + 1);
    auto res = std::from_chars(off.data(), off.data() + off.size(), entry.offset);
    if (off.empty() || res.ec != std::errc() || res.ptr != off.data() + off.size())
      throw ParseError(line_no, "bad byte offset '" + std::string(off) + "'");
    if (!keys.insert(entry.key).second)
      throw Error(ErrorCode::kDuplicateKey, "duplicate scp key '" + entry.key + "'");
    auto it = last_offset.find(entry.ark_path);
    if (it != last_offset.end() && entry.offset <= it->second)
      throw ParseError(line_no, "offsets must increase within " + entry.ark_path);
    last_offset[entry.ark_path] = entry.offset;
    index.entries.push_back(std::move(entry));
  }
  return index;
}

ScpIndex ReadScp(const std::string &path) { return ParseScp(ReadAll(path)); }

std::string WriteScpText(const ScpIndex &index) {
  std::string out;
  for (const ScpEntry &e : index.entries)
    out += e.key + '\t' + e.ark_path + ':' + std::to_string(e.offset) + '\n';
  return out;
}

void WriteScp(const std::string &path, const ScpIndex &index) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + path);
  os << WriteScpText(index);
  if (!os) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

ScpIndex WriteArk(const std::string &ark_path,
                  std::span<const Lattice> lattices) {
  ScpIndex index;
  std::set<std::string> keys;
  std::string data;
  for (const Lattice &lat : lattices) {
    const std::string &key = lat.meta().utterance_id;
    if (!keys.insert(key).second)
      throw Error(ErrorCode::kDuplicateKey, "duplicate ark key '" + key + "'");
    index.entries.push_back({key, ark_path, data.size()});
    data += WriteLatticeText(lat);
  }
  std::ofstream os(ark_path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot write " + ark_path);
  os << data;
  if (!os) throw Error(ErrorCode::kIoError, "write failed: " + ark_path);
  return index;
}

namespace {

// The text block of one indexed entry, read from its exact byte offset.
std::string ReadEntryBlock(const ScpIndex &index, std::string_view key,
                           const std::string &scp_dir) {
  const ScpEntry *entry = index.Find(key);
  if (entry == nullptr)
    throw Error(ErrorCode::kKeyNotFound, "key '" + std::string(key) + "'");
  namespace fs = std::filesystem;
  std::string path = entry->ark_path;
  if (!scp_dir.empty() && fs::path(path).is_relative() && !fs::exists(path))
    path = (fs::path(scp_dir) / path).string();
  std::ifstream is = OpenInput(path);
  is.seekg(static_cast<std::streamoff>(entry->offset));
  std::string line;
  if (!is || !std::getline(is, line) || line != key)
    throw Error(ErrorCode::kOffsetMismatch,
                "bytes at " + path + ":" + std::to_string(entry->offset) +
                    " do not start entry '" + std::string(key) + "'");
  std::string block = line + '\n';
  while (std::getline(is, line)) {
    block += line;
    block += '\n';
    if (line.empty()) break;
  }
  return block;
}

}  // namespace

Lattice ReadArkEntry(const ScpIndex &index, std::string_view key,
                     const std::string &scp_dir) {
  return ParseLatticeText(ReadEntryBlock(index, key, scp_dir));
}

std::vector<Lattice> ReadArk(const std::string &ark_path, bool validate) {
  std::string data = ReadAll(ark_path);
  std::vector<std::string_view> lines = SplitLines(data);
  std::vector<Lattice> out;
  size_t i = 0;
  while (i < lines.size()) {
    if (lines[i].empty()) {
      i++;
      continue;
    }
    size_t begin = i;
    while (i < lines.size() && !lines[i].empty()) i++;
    // Include the terminator line when present.
    size_t end = i < lines.size() ? i + 1 : i;
    std::string block;
    for (size_t j = begin; j < end; j++) {
      block += lines[j];
      block += '\n';
    }
    out.push_back(ParseLatticeText(block, validate, static_cast<int>(begin) + 1));
    i = end;
  }
  return out;
}

std::vector<Lattice> ReadLattices(const std::string &path, bool validate) {
  namespace fs = std::filesystem;
  if (fs::path(path).extension() != ".scp") return ReadArk(path, validate);
  ScpIndex index = ReadScp(path);
  std::string dir = fs::path(path).parent_path().string();
  std::vector<Lattice> out;
  for (const ScpEntry &e : index.entries)
    out.push_back(ParseLatticeText(ReadEntryBlock(index, e.key, dir), validate));
  return out;
}

Transcripts ParseTranscripts(std::string_view text) {
  Transcripts out;
  std::vector<std::string_view> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); i++) {
    const int line_no = static_cast<int>(i) + 1;
    for (char c : lines[i]) {
      if (static_cast<unsigned char>(c) < 0x20 && c != '\t')
        throw ParseError(line_no, "control character in transcript");
    }
    std::vector<std::string_view> fields = SplitFields(lines[i]);
    if (fields.empty()) continue;
    std::vector<std::string> words(fields.begin() + 1, fields.end());
    std::string key(fields[0]);
    if (!out.emplace(key, std::move(words)).second)
      throw Error(ErrorCode::kDuplicateKey, "duplicate transcript key '" + key + "'");
  }
  return out;
}

Transcripts ReadTranscripts(const std::string &path) {
  return ParseTranscripts(ReadAll(path));
}

std::string FormatTranscriptLine(const std::string &key,
                                 std::span<const std::string> words) {
  std::string out = key;
  for (const std::string &w : words) {
    out += ' ';
    out += w;
  }
  return out;
}

}  // namespace latrescore
