// latrescore/lattice-algo.h

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

#ifndef LATRESCORE_LATTICE_ALGO_H_
#define LATRESCORE_LATTICE_ALGO_H_

#include <span>
#include <string>
#include <vector>

#include "latrescore/lattice.h"

namespace latrescore {

enum class ViolationKind {
  kCycle,           // arc closes a cycle
  kUnreachable,     // state not reachable from start
  kNotCoreachable,  // no final state reachable from this state
  kNoFinal,         // lattice has no final state
};

struct Violation {
  ViolationKind kind;
  StateId state = -1;  // -1 when not state-specific
  ArcId arc = -1;      // -1 when not arc-specific

  std::string ToString() const;
  bool operator==(const Violation &other) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(ViolationKind kind) const;
  std::string ToString() const;
};

/// Checks acyclicity, reachability, co-reachability and the presence of a
/// final state.  Violations are returned as data; this never throws.
ValidationReport Validate(const Lattice &lat);

/// Topological order with ties broken by ascending state id.
/// Throws kCyclicLattice.
std::vector<StateId> TopoOrder(const Lattice &lat);

/// Scores an explicit arc sequence.  Throws kMalformedPath unless the arcs are
/// connected, leave the start state and end in a final state.
PathScore ScorePath(const Lattice &lat, std::span<const ArcId> arcs,
                    const RescoreConfig &cfg);

/// Fills words and score for an arc sequence.
LatticePath MakePath(const Lattice &lat, std::vector<ArcId> arcs,
                     const RescoreConfig &cfg);

// Paths are totally ordered by: combined score (higher first), then word
// sequence (lexicographically smaller first), then fewer arcs, then arc ids
// lexicographically.  BestPath and NBest honor this order exactly.

/// Drops states (and their arcs) that are not on any start-to-final path,
/// renumbering densely in ascending original id.  Throws kNoPath if the start
/// state cannot reach a final state.
Lattice Connect(const Lattice &lat);

/// Viterbi over the DAG.  Throws kNoPath if no final state is reachable and
/// kCyclicLattice on cycles.
LatticePath BestPath(const Lattice &lat, const RescoreConfig &cfg);

/// Exact k-best by best-first search whose heuristic is the exact backward
/// Viterbi completion, so complete paths come out in path order.  With
/// unique_words, later paths repeating an earlier word sequence are skipped.
std::vector<LatticePath> NBest(const Lattice &lat, int k,
                               const RescoreConfig &cfg,
                               bool unique_words = false);

/// A lattice split so that every state carries a unique n-gram history.
struct ExpandedLattice {
  Lattice lattice;
  // Indexed by expanded state: the original state and the last (order-1)
  // words leading into it.  A history shorter than order-1 means the words
  // follow the sentence start directly.
  std::vector<StateId> origin_state;
  std::vector<std::vector<std::string>> histories;
  // Indexed by expanded arc: the original arc it copies.
  std::vector<ArcId> origin_arc;
};

/// History expansion for an n-gram model of the given order (>= 1).  The
/// output is path-equivalent to the input.  States are numbered by
/// (original state, history) so order 1 reproduces the input.
ExpandedLattice ExpandWithHistories(const Lattice &lat, int order);
Lattice ExpandForOrder(const Lattice &lat, int order);

/// Keeps exactly the arcs on some complete path scoring within beam of the
/// best; the best path always survives.  States are renumbered densely in
/// ascending original id.  Throws kNoPath.
Lattice Prune(const Lattice &lat, double beam, const RescoreConfig &cfg);

/// Graphviz export; edges labeled word/acoustic,lm.
std::string ToDot(const Lattice &lat);

}  // namespace latrescore

#endif  // LATRESCORE_LATTICE_ALGO_H_
