// core/src/lattice-algo.cc

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

#include "latrescore/lattice-algo.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "latrescore/error.h"

namespace latrescore {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const char *ViolationName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCycle: return "CYCLE";
    case ViolationKind::kUnreachable: return "UNREACHABLE";
    case ViolationKind::kNotCoreachable: return "NOT_COREACHABLE";
    case ViolationKind::kNoFinal: return "NO_FINAL";
  }
  return "?";
}

std::vector<bool> Reachable(const Lattice &lat) {
  std::vector<bool> seen(lat.num_states(), false);
  std::vector<StateId> stack = {lat.start()};
  seen[lat.start()] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (ArcId a : lat.OutArcs(s)) {
      StateId t = lat.arc(a).to;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

std::vector<bool> Coreachable(const Lattice &lat) {
  std::vector<bool> seen(lat.num_states(), false);
  std::vector<StateId> stack;
  for (const auto &[s, score] : lat.finals()) {
    seen[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (ArcId a : lat.InArcs(s)) {
      StateId f = lat.arc(a).from;
      if (!seen[f]) {
        seen[f] = true;
        stack.push_back(f);
      }
    }
  }
  return seen;
}

// Arcs that close a cycle, found by iterative DFS visiting states and arcs in
// ascending id order.
std::vector<ArcId> BackEdges(const Lattice &lat) {
  enum Color : char { kWhite, kGrey, kBlack };
  std::vector<Color> color(lat.num_states(), kWhite);
  std::vector<ArcId> back;
  // (state, position in its out-arc list)
  std::vector<std::pair<StateId, size_t>> stack;
  for (StateId root = 0; root < lat.num_states(); root++) {
    if (color[root] != kWhite) continue;
    color[root] = kGrey;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto &[s, pos] = stack.back();
      auto out = lat.OutArcs(s);
      if (pos == out.size()) {
        color[s] = kBlack;
        stack.pop_back();
        continue;
      }
      ArcId a = out[pos++];
      StateId t = lat.arc(a).to;
      if (color[t] == kGrey) {
        back.push_back(a);
      } else if (color[t] == kWhite) {
        color[t] = kGrey;
        stack.push_back({t, 0});
      }
    }
  }
  std::sort(back.begin(), back.end());
  return back;
}

// Interned word labels whose integer order equals string order, so path
// comparisons can use integer sequences.
class WordRanks {
 public:
  explicit WordRanks(const Lattice &lat) {
    std::vector<std::string> words;
    for (const Arc &arc : lat.arcs())
      if (!arc.IsEpsilon()) words.push_back(arc.word);
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    ranks_.resize(lat.num_arcs(), -1);
    for (ArcId a = 0; a < lat.num_arcs(); a++) {
      const Arc &arc = lat.arc(a);
      if (arc.IsEpsilon()) continue;
      ranks_[a] = static_cast<std::int32_t>(
          std::lower_bound(words.begin(), words.end(), arc.word) -
          words.begin());
    }
  }
  // -1 for epsilon arcs.
  std::int32_t operator[](ArcId a) const { return ranks_[a]; }

 private:
  std::vector<std::int32_t> ranks_;
};

// A (partial or complete) path together with the sort key of the path order.
struct PathKey {
  double score = 0.0;
  std::vector<std::int32_t> words;
  std::vector<ArcId> arcs;
};

// True if a precedes b in the path order.
bool Precedes(const PathKey &a, const PathKey &b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.words != b.words) return a.words < b.words;
  if (a.arcs.size() != b.arcs.size()) return a.arcs.size() < b.arcs.size();
  return a.arcs < b.arcs;
}

PathKey Prepend(ArcId a, std::int32_t rank, double weight,
                const PathKey &suffix) {
  PathKey key;
  key.score = weight + suffix.score;
  key.words.reserve(suffix.words.size() + 1);
  if (rank >= 0) key.words.push_back(rank);
  key.words.insert(key.words.end(), suffix.words.begin(), suffix.words.end());
  key.arcs.reserve(suffix.arcs.size() + 1);
  key.arcs.push_back(a);
  key.arcs.insert(key.arcs.end(), suffix.arcs.begin(), suffix.arcs.end());
  return key;
}

// Best completion from every state to the end of the lattice, under the path
// order.  Because completions of a common prefix compare exactly as the
// suffixes do, this backward recursion is exact for the full order.
std::vector<std::optional<PathKey>> BestSuffixes(const Lattice &lat,
                                                 const RescoreConfig &cfg,
                                                 const WordRanks &ranks) {
  std::vector<StateId> order = TopoOrder(lat);
  std::vector<std::optional<PathKey>> best(lat.num_states());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    StateId s = *it;
    std::optional<PathKey> &cur = best[s];
    if (auto final_score = lat.FinalScore(s)) {
      cur = PathKey{*final_score, {}, {}};
    }
    for (ArcId a : lat.OutArcs(s)) {
      const auto &next = best[lat.arc(a).to];
      if (!next) continue;
      PathKey cand = Prepend(a, ranks[a], ArcWeight(lat.arc(a), cfg), *next);
      if (!cur || Precedes(cand, *cur)) cur = std::move(cand);
    }
  }
  return best;
}

// Max-score forward (from start) and backward (to an end) Viterbi scores.
void ForwardBackward(const Lattice &lat, const RescoreConfig &cfg,
                     std::vector<double> *alpha, std::vector<double> *beta) {
  std::vector<StateId> order = TopoOrder(lat);
  alpha->assign(lat.num_states(), kNegInf);
  beta->assign(lat.num_states(), kNegInf);
  (*alpha)[lat.start()] = 0.0;
  for (StateId s : order) {
    if ((*alpha)[s] == kNegInf) continue;
    for (ArcId a : lat.OutArcs(s)) {
      double v = (*alpha)[s] + ArcWeight(lat.arc(a), cfg);
      double &dst = (*alpha)[lat.arc(a).to];
      if (v > dst) dst = v;
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    StateId s = *it;
    double b = lat.FinalScore(s).value_or(kNegInf);
    for (ArcId a : lat.OutArcs(s)) {
      double next = (*beta)[lat.arc(a).to];
      if (next == kNegInf) continue;
      b = std::max(b, ArcWeight(lat.arc(a), cfg) + next);
    }
    (*beta)[s] = b;
  }
}

std::string FormatShort(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string DotEscape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string Violation::ToString() const {
  std::string out = ViolationName(kind);
  if (state >= 0) out += "(state " + std::to_string(state) + ")";
  if (arc >= 0) out += "(arc " + std::to_string(arc) + ")";
  return out;
}

bool ValidationReport::Has(ViolationKind kind) const {
  for (const Violation &v : violations)
    if (v.kind == kind) return true;
  return false;
}

std::string ValidationReport::ToString() const {
  if (ok()) return "OK";
  std::string out;
  for (const Violation &v : violations) {
    if (!out.empty()) out += ' ';
    out += v.ToString();
  }
  return out;
}

ValidationReport Validate(const Lattice &lat) {
  ValidationReport report;
  if (lat.finals().empty())
    report.violations.push_back({ViolationKind::kNoFinal, -1, -1});
  for (ArcId a : BackEdges(lat))
    report.violations.push_back({ViolationKind::kCycle, lat.arc(a).from, a});
  std::vector<bool> reach = Reachable(lat), coreach = Coreachable(lat);
  for (StateId s = 0; s < lat.num_states(); s++) {
    if (!reach[s])
      report.violations.push_back({ViolationKind::kUnreachable, s, -1});
  }
  if (!lat.finals().empty()) {
    for (StateId s = 0; s < lat.num_states(); s++) {
      if (!coreach[s])
        report.violations.push_back({ViolationKind::kNotCoreachable, s, -1});
    }
  }
  return report;
}

std::vector<StateId> TopoOrder(const Lattice &lat) {
  std::vector<std::int32_t> indegree(lat.num_states(), 0);
  for (const Arc &arc : lat.arcs()) indegree[arc.to]++;
  std::priority_queue<StateId, std::vector<StateId>, std::greater<StateId>>
      ready;
  for (StateId s = 0; s < lat.num_states(); s++)
    if (indegree[s] == 0) ready.push(s);
  std::vector<StateId> order;
  order.reserve(lat.num_states());
  while (!ready.empty()) {
    StateId s = ready.top();
    ready.pop();
    order.push_back(s);
    for (ArcId a : lat.OutArcs(s))
      if (--indegree[lat.arc(a).to] == 0) ready.push(lat.arc(a).to);
  }
  if (static_cast<StateId>(order.size()) != lat.num_states())
    throw Error(ErrorCode::kCyclicLattice,
                "lattice '" + lat.meta().utterance_id + "' has a cycle");
  return order;
}

PathScore ScorePath(const Lattice &lat, std::span<const ArcId> arcs,
                    const RescoreConfig &cfg) {
  auto malformed = [](const std::string &msg) {
    throw Error(ErrorCode::kMalformedPath, msg);
  };
  StateId cur = lat.start();
  PathScore score;
  for (size_t i = 0; i < arcs.size(); i++) {
    if (arcs[i] < 0 || arcs[i] >= lat.num_arcs())
      malformed("arc id " + std::to_string(arcs[i]) + " out of range");
    const Arc &arc = lat.arc(arcs[i]);
    if (arc.from != cur)
      malformed("arc " + std::to_string(i) + " does not continue the path");
    score.acoustic_total += arc.acoustic_score;
    score.lm_total += arc.lm_score;
    if (!arc.IsEpsilon()) score.word_count++;
    cur = arc.to;
  }
  auto final_score = lat.FinalScore(cur);
  if (!final_score) malformed("path does not end in a final state");
  score.final_score = *final_score;
  score.combined = CombinedScore(score.acoustic_total, score.lm_total,
                                 score.word_count, score.final_score, cfg);
  return score;
}

LatticePath MakePath(const Lattice &lat, std::vector<ArcId> arcs,
                     const RescoreConfig &cfg) {
  LatticePath path;
  path.score = ScorePath(lat, arcs, cfg);
  for (ArcId a : arcs)
    if (!lat.arc(a).IsEpsilon()) path.words.push_back(lat.arc(a).word);
  path.arcs = std::move(arcs);
  return path;
}

Lattice Connect(const Lattice &lat) {
  std::vector<bool> reach = Reachable(lat), coreach = Coreachable(lat);
  if (!coreach[lat.start()])
    throw Error(ErrorCode::kNoPath, "no final state reachable in lattice '" +
                                        lat.meta().utterance_id + "'");
  std::vector<StateId> remap(lat.num_states(), -1);
  StateId n = 0;
  for (StateId s = 0; s < lat.num_states(); s++)
    if (reach[s] && coreach[s]) remap[s] = n++;
  std::vector<Arc> arcs;
  for (const Arc &arc : lat.arcs()) {
    if (remap[arc.from] < 0 || remap[arc.to] < 0) continue;
    Arc copy = arc;
    copy.from = remap[arc.from];
    copy.to = remap[arc.to];
    arcs.push_back(std::move(copy));
  }
  std::map<StateId, double> finals;
  for (const auto &[s, score] : lat.finals())
    if (remap[s] >= 0) finals[remap[s]] = score;
  return Lattice(n, remap[lat.start()], std::move(finals), std::move(arcs),
                 lat.meta());
}

LatticePath BestPath(const Lattice &lat, const RescoreConfig &cfg) {
  cfg.Check();
  WordRanks ranks(lat);
  auto suffixes = BestSuffixes(lat, cfg, ranks);
  const auto &best = suffixes[lat.start()];
  if (!best)
    throw Error(ErrorCode::kNoPath, "no final state reachable in lattice '" +
                                        lat.meta().utterance_id + "'");
  return MakePath(lat, best->arcs, cfg);
}

std::vector<LatticePath> NBest(const Lattice &lat, int k,
                               const RescoreConfig &cfg, bool unique_words) {
  cfg.Check();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  WordRanks ranks(lat);
  auto suffixes = BestSuffixes(lat, cfg, ranks);
  if (!suffixes[lat.start()])
    throw Error(ErrorCode::kNoPath, "no final state reachable in lattice '" +
                                        lat.meta().utterance_id + "'");

  // The key of an entry is its prefix followed by the best completion, so
  // keys popped from the queue never improve and a complete path is popped
  // exactly when it is next in path order.
  struct Entry {
    PathKey key;
    StateId state;  // -1 once the path has terminated
    size_t prefix_arcs;
    size_t prefix_words;
    double prefix_score;
  };
  auto worse = [](const Entry &a, const Entry &b) {
    return Precedes(b.key, a.key);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  queue.push({*suffixes[lat.start()], lat.start(), 0, 0, 0.0});

  std::vector<LatticePath> out;
  std::set<std::vector<std::int32_t>> seen_words;
  while (!queue.empty() && static_cast<int>(out.size()) < k) {
    Entry top = queue.top();
    queue.pop();
    if (top.state < 0) {
      if (unique_words && !seen_words.insert(top.key.words).second) continue;
      out.push_back(MakePath(lat, std::move(top.key.arcs), cfg));
      continue;
    }
    std::vector<std::int32_t> prefix_words(
        top.key.words.begin(), top.key.words.begin() + top.prefix_words);
    std::vector<ArcId> prefix_arcs(top.key.arcs.begin(),
                                   top.key.arcs.begin() + top.prefix_arcs);
    if (auto final_score = lat.FinalScore(top.state)) {
      queue.push({PathKey{top.prefix_score + *final_score, prefix_words,
                          prefix_arcs},
                  -1, top.prefix_arcs, top.prefix_words, top.prefix_score});
    }
    for (ArcId a : lat.OutArcs(top.state)) {
      const Arc &arc = lat.arc(a);
      const auto &suffix = suffixes[arc.to];
      if (!suffix) continue;
      double prefix_score = top.prefix_score + ArcWeight(arc, cfg);
      Entry child;
      child.key.score = prefix_score + suffix->score;
      child.key.words = prefix_words;
      if (ranks[a] >= 0) child.key.words.push_back(ranks[a]);
      child.prefix_words = child.key.words.size();
      child.key.words.insert(child.key.words.end(), suffix->words.begin(),
                             suffix->words.end());
      child.key.arcs = prefix_arcs;
      child.key.arcs.push_back(a);
      child.prefix_arcs = child.key.arcs.size();
      child.key.arcs.insert(child.key.arcs.end(), suffix->arcs.begin(),
                            suffix->arcs.end());
      child.state = arc.to;
      child.prefix_score = prefix_score;
      queue.push(std::move(child));
    }
  }
  return out;
}

ExpandedLattice ExpandWithHistories(const Lattice &lat, int order) {
  if (order < 1)
    throw Error(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  const size_t history_len = static_cast<size_t>(order - 1);
  typedef std::pair<StateId, std::vector<std::string>> StateKey;

  std::vector<StateId> topo = TopoOrder(lat);
  // Expanded states keyed by (original state, history); the map order is the
  // final numbering.
  std::map<StateKey, StateId> states;
  struct PendingArc {
    StateKey from, to;
    ArcId origin;
  };
  std::vector<PendingArc> pending;
  states.emplace(StateKey{lat.start(), {}}, 0);
  for (StateId s : topo) {
    auto lo = states.lower_bound(StateKey{s, {}});
    std::vector<StateKey> here;
    for (auto it = lo; it != states.end() && it->first.first == s; ++it)
      here.push_back(it->first);
    for (const StateKey &key : here) {
      for (ArcId a : lat.OutArcs(s)) {
        const Arc &arc = lat.arc(a);
        std::vector<std::string> next = key.second;
        if (!arc.IsEpsilon() && history_len > 0) {
          next.push_back(arc.word);
          if (next.size() > history_len) next.erase(next.begin());
        }
        StateKey to{arc.to, std::move(next)};
        states.emplace(to, 0);
        pending.push_back({key, std::move(to), a});
      }
    }
  }

  ExpandedLattice out{Lattice(1, 0, {}, {}), {}, {}, {}};
  StateId next_id = 0;
  for (auto &[key, id] : states) {
    id = next_id++;
    out.origin_state.push_back(key.first);
    out.histories.push_back(key.second);
  }
  std::sort(pending.begin(), pending.end(),
            [&](const PendingArc &x, const PendingArc &y) {
              StateId fx = states.at(x.from), fy = states.at(y.from);
              if (fx != fy) return fx < fy;
              return x.origin < y.origin;
            });
  std::vector<Arc> arcs;
  arcs.reserve(pending.size());
  for (const PendingArc &p : pending) {
    Arc arc = lat.arc(p.origin);
    arc.from = states.at(p.from);
    arc.to = states.at(p.to);
    arcs.push_back(std::move(arc));
    out.origin_arc.push_back(p.origin);
  }
  std::map<StateId, double> finals;
  for (const auto &[key, id] : states) {
    if (auto f = lat.FinalScore(key.first)) finals[id] = *f;
  }
  StateId start = states.at(StateKey{lat.start(), {}});
  out.lattice = Lattice(next_id, start, std::move(finals), std::move(arcs),
                        lat.meta());
  return out;
}

Lattice ExpandForOrder(const Lattice &lat, int order) {
  return ExpandWithHistories(lat, order).lattice;
}

Lattice Prune(const Lattice &lat, double beam, const RescoreConfig &cfg) {
  if (std::isnan(beam) || beam < 0)
    throw Error(ErrorCode::kInvalidArgument, "beam must be >= 0");
  LatticePath best = BestPath(lat, cfg);
  std::vector<double> alpha, beta;
  ForwardBackward(lat, cfg, &alpha, &beta);
  const double threshold = beta[lat.start()] - beam;

  std::vector<bool> keep_arc(lat.num_arcs(), false);
  for (ArcId a : best.arcs) keep_arc[a] = true;
  for (ArcId a = 0; a < lat.num_arcs(); a++) {
    const Arc &arc = lat.arc(a);
    double through = alpha[arc.from] + ArcWeight(arc, cfg) + beta[arc.to];
    if (std::isfinite(through) && through >= threshold) keep_arc[a] = true;
  }
  StateId best_end =
      best.arcs.empty() ? lat.start() : lat.arc(best.arcs.back()).to;
  std::vector<bool> keep_final(lat.num_states(), false);
  for (const auto &[s, score] : lat.finals()) {
    double through = alpha[s] + score;
    if (s == best_end || (std::isfinite(through) && through >= threshold))
      keep_final[s] = true;
  }

  std::vector<bool> keep_state(lat.num_states(), false);
  keep_state[lat.start()] = true;
  for (ArcId a = 0; a < lat.num_arcs(); a++) {
    if (!keep_arc[a]) continue;
    keep_state[lat.arc(a).from] = keep_state[lat.arc(a).to] = true;
  }
  for (StateId s = 0; s < lat.num_states(); s++)
    if (keep_final[s]) keep_state[s] = true;
  std::vector<StateId> remap(lat.num_states(), -1);
  StateId n = 0;
  for (StateId s = 0; s < lat.num_states(); s++)
    if (keep_state[s]) remap[s] = n++;

  std::vector<Arc> arcs;
  for (ArcId a = 0; a < lat.num_arcs(); a++) {
    if (!keep_arc[a]) continue;
    Arc arc = lat.arc(a);
    arc.from = remap[arc.from];
    arc.to = remap[arc.to];
    arcs.push_back(std::move(arc));
  }
  std::map<StateId, double> finals;
  for (const auto &[s, score] : lat.finals())
    if (keep_final[s]) finals[remap[s]] = score;
  return Lattice(n, remap[lat.start()], std::move(finals), std::move(arcs),
                 lat.meta());
}

std::string ToDot(const Lattice &lat) {
  std::ostringstream os;
  os << "digraph \"" << DotEscape(lat.meta().utterance_id) << "\" {\n";
  os << "  rankdir = LR;\n";
  for (StateId s = 0; s < lat.num_states(); s++) {
    os << "  " << s << " [shape = "
       << (lat.IsFinal(s) ? "doublecircle" : "circle");
    if (s == lat.start()) os << ", style = bold";
    os << "];\n";
  }
  for (const Arc &arc : lat.SortedArcs()) {
    os << "  " << arc.from << " -> " << arc.to << " [label = \""
       << DotEscape(arc.word) << '/' << FormatShort(arc.acoustic_score) << ','
       << FormatShort(arc.lm_score) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace latrescore
