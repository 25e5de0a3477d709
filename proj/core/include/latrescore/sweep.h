// latrescore/sweep.h

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

#ifndef LATRESCORE_SWEEP_H_
#define LATRESCORE_SWEEP_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latrescore/lattice.h"
#include "latrescore/lattice-io.h"
#include "latrescore/ngram-lm.h"
#include "latrescore/wer.h"

namespace latrescore {

struct TestSet {
  std::string name;
  std::vector<Lattice> lattices;
};

// Rescoring model for a sweep.  An n-gram model rescores lattices exactly;
// otherwise a scorer rescores n-best lists of nbest_k paths.  With neither,
// the sweep only decodes the raw lattices.
struct SweepLm {
  const NGramLM *ngram = nullptr;
  const LmScorer *scorer = nullptr;
  int nbest_k = 50;

  bool rescores() const { return ngram != nullptr || scorer != nullptr; }
};

struct SweepCell {
  std::string test_set;
  double lm_scale = 0.0;
  double wip = 0.0;
  WerBreakdown pre;                      // raw lattice decode
  std::optional<WerBreakdown> post;      // after rescoring
  std::optional<RelativeChange> change;  // unset when a WER is zero

  const WerBreakdown &reported() const { return post ? *post : pre; }
};

struct SweepReport {
  std::vector<std::string> test_sets;
  std::vector<double> scales;
  std::vector<double> wips;
  std::vector<SweepCell> cells;  // test set, then scale, then wip

  const SweepCell *Find(const std::string &test_set, double lm_scale,
                        double wip) const;

  /// Header test_set,lm_scale,wip,wer,subs,ins,dels,ref_words,change_paper,
  /// change_standard; WER and changes with 2 decimals, NA when undefined.
  std::string ToCsv() const;

  /// Scale rows by WIP columns, pre and post WER per column, per test set.
  std::string ToTable() const;
};

/// Best hypothesis per lattice, keyed by utterance id, after rescoring with
/// lm (raw decode when lm rescores nothing).
Transcripts DecodeBest(std::span<const Lattice> lattices, const SweepLm &lm,
                       const RescoreConfig &cfg);

/// Evaluates every (test set, scale, wip) cell; lm_interp comes from base.
/// Each cell is computed independently of the others.
SweepReport Sweep(std::span<const TestSet> sets, const Transcripts &refs,
                  std::span<const double> scales, std::span<const double> wips,
                  const SweepLm &lm, const RescoreConfig &base = {});

}  // namespace latrescore

#endif  // LATRESCORE_SWEEP_H_
