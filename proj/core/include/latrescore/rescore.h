// latrescore/rescore.h

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

#ifndef LATRESCORE_RESCORE_H_
#define LATRESCORE_RESCORE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latrescore/lattice.h"
#include "latrescore/ngram-lm.h"

namespace latrescore {

// Every rescoring path combines scores the same way:
//   effective_lm = (1 - lm_interp) * original_lm + lm_interp * new_lm
//   combined     = acoustic + lm_scale * effective_lm - wip * words + final

double EffectiveLm(double original_lm, double new_lm, const RescoreConfig &cfg);

/// Contribution of one arc.  The penalty applies only to word arcs.
/// Throws kNonFiniteScore.
double CombineArcScore(double acoustic, double original_lm, double new_lm,
                       const RescoreConfig &cfg, bool is_word = true);

struct Hypothesis {
  std::vector<std::string> words;
  double acoustic_total = 0.0;
  double original_lm_total = 0.0;
  double new_lm_total = 0.0;
  std::int32_t word_count = 0;
  double final_score = 0.0;
  double combined = 0.0;
  std::int32_t rank_before = 0;  // 1-based
  std::int32_t rank_after = 0;   // 1-based
};

/// Hypotheses ordered by combined score, best first.
struct NBestList {
  std::string utterance_id;
  std::vector<Hypothesis> hypotheses;
};

/// Exact n-gram lattice rescoring.  The lattice is history-expanded to the
/// model order, every arc's LM score becomes the effective LM score of its
/// word given the history of its source state, and each final state gets an
/// epsilon arc to a new final state carrying the </s> term, so lattice and
/// n-best rescoring share one event space.  Acoustic scores are copied
/// unchanged.  Throws kCyclicLattice, kNoPath.
Lattice RescoreLattice(const Lattice &lat, const NGramLM &lm,
                       const RescoreConfig &cfg);

/// N-best rescoring for any scorer: extracts NBest(k) under the original
/// scores, replaces each hypothesis' LM term with scorer.ScoreSequence() via
/// the combination formula and re-sorts (ties: words, then original rank).
/// Throws kNoPath; external scorers may throw kScorerUnavailable.
NBestList RescoreNBest(const Lattice &lat, const LmScorer &scorer, int k,
                       const RescoreConfig &cfg);

enum class ScoreKind { kProbability, kLogProbability };

/// Maps scorer outputs to natural-log probabilities.  Probabilities must lie
/// in (0, 1]; log-probabilities must be finite and <= 0.
/// Throws kInvalidProbability.
std::vector<double> ConvertNeuralScores(std::span<const double> raw,
                                        ScoreKind kind);

}  // namespace latrescore

#endif  // LATRESCORE_RESCORE_H_
