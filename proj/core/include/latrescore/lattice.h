// latrescore/lattice.h

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

#ifndef LATRESCORE_LATTICE_H_
#define LATRESCORE_LATTICE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace latrescore {

typedef std::int32_t StateId;
typedef std::int32_t ArcId;

inline constexpr std::string_view kEpsilon = "<eps>";

// Scores are natural-log likelihoods, higher is better.  Files store costs
// (negated scores); the sign flip lives in lattice-io only.
struct Arc {
  StateId from = 0;
  StateId to = 0;
  std::string word;
  double acoustic_score = 0.0;
  double lm_score = 0.0;
  std::vector<std::string> phones;  // empty when the lattice has no alignment

  bool IsEpsilon() const { return word == kEpsilon; }

  bool operator==(const Arc &other) const = default;
};

/// Canonical arc order: (from, to, word), then scores and phones so that the
/// order is total.
bool CanonicalArcLess(const Arc &a, const Arc &b);

enum class AmKind { kUnknown, kDnn, kGmm };
enum class AlignmentKind { kUnknown, kPhoneThenWord, kDirectWord };

// The four lattice types (DNN/GMM x phone-then-word/direct-word alignment)
// share one in-memory representation; the kind is carried as metadata only.
struct LatticeMeta {
  std::string utterance_id;
  AmKind am_kind = AmKind::kUnknown;
  AlignmentKind alignment_kind = AlignmentKind::kUnknown;

  bool operator==(const LatticeMeta &other) const = default;
};

/// An immutable word lattice over dense state ids 0..num_states()-1.
///
/// Construction checks local well-formedness only (ids in range, finite
/// scores, non-empty words) and throws kInvalidLattice otherwise.  Global
/// properties (acyclicity, connectivity, a final state) are reported by
/// Validate() in lattice-algo.h, so malformed graphs can still be inspected.
class Lattice {
 public:
  Lattice(StateId num_states, StateId start, std::map<StateId, double> finals,
          std::vector<Arc> arcs, LatticeMeta meta = {});

  StateId num_states() const { return num_states_; }
  StateId start() const { return start_; }
  const std::map<StateId, double> &finals() const { return finals_; }
  const std::vector<Arc> &arcs() const { return arcs_; }
  const Arc &arc(ArcId id) const { return arcs_[id]; }
  ArcId num_arcs() const { return static_cast<ArcId>(arcs_.size()); }
  const LatticeMeta &meta() const { return meta_; }

  bool IsFinal(StateId s) const { return finals_.count(s) != 0; }
  std::optional<double> FinalScore(StateId s) const;

  /// Arc ids leaving / entering a state, ascending.
  std::span<const ArcId> OutArcs(StateId s) const;
  std::span<const ArcId> InArcs(StateId s) const;

  /// Arcs in canonical order; equality compares lattices on this view, so arc
  /// insertion order does not matter.
  std::vector<Arc> SortedArcs() const;

  Lattice WithMeta(LatticeMeta meta) const;

  bool operator==(const Lattice &other) const;

 private:
  StateId num_states_;
  StateId start_;
  std::map<StateId, double> finals_;
  std::vector<Arc> arcs_;
  LatticeMeta meta_;
  std::vector<ArcId> out_offsets_, out_arcs_;
  std::vector<ArcId> in_offsets_, in_arcs_;
};

/// Knobs of the score combination.  lm_interp weights the new LM against the
/// LM score stored on the arcs (1.0 replaces it).
struct RescoreConfig {
  double lm_scale = 1.0;
  double wip = 0.0;
  double lm_interp = 1.0;

  /// Throws kInvalidArgument unless lm_scale >= 0, wip >= 0 and
  /// 0 <= lm_interp <= 1 (all finite).
  void Check() const;
};

/// Decomposed score of a complete path.  combined is always
///   acoustic_total + lm_scale * lm_total - wip * word_count + final_score.
struct PathScore {
  double acoustic_total = 0.0;
  double lm_total = 0.0;
  std::int32_t word_count = 0;
  double final_score = 0.0;
  double combined = 0.0;
};

double CombinedScore(double acoustic_total, double lm_total,
                     std::int32_t word_count, double final_score,
                     const RescoreConfig &cfg);

/// Per-arc contribution to the combined score under cfg.
double ArcWeight(const Arc &arc, const RescoreConfig &cfg);

struct LatticePath {
  std::vector<ArcId> arcs;
  std::vector<std::string> words;  // non-epsilon labels, in order
  PathScore score;
};

}  // namespace latrescore

#endif  // LATRESCORE_LATTICE_H_
