// latrescore/wer.h

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

#ifndef LATRESCORE_WER_H_
#define LATRESCORE_WER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latrescore/lattice-io.h"

namespace latrescore {

enum class EditOp { kMatch, kSubstitution, kDeletion, kInsertion };

/// Minimum unit-cost alignment of hyp against ref.  Among equal-cost
/// alignments the backtrace prefers match, then substitution, then deletion,
/// then insertion.
std::vector<EditOp> Align(std::span<const std::string> ref,
                          std::span<const std::string> hyp);

struct WerBreakdown {
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t ref_words = 0;

  std::int64_t errors() const { return substitutions + insertions + deletions; }
  /// 100 * errors / ref_words; can exceed 100.  Throws kInvalidArgument when
  /// there are no reference words.
  double wer_percent() const;

  WerBreakdown &operator+=(const WerBreakdown &other);
  bool operator==(const WerBreakdown &other) const = default;
};

WerBreakdown CountEdits(std::span<const EditOp> ops);
WerBreakdown ComputeWer(std::span<const std::string> ref,
                        std::span<const std::string> hyp);

/// Pools edit counts over every hypothesis before dividing.  Reference keys
/// without a hypothesis are ignored.  Throws kMissingReference.
WerBreakdown CorpusWer(const Transcripts &refs, const Transcripts &hyps);

struct RelativeChange {
  double paper = 0.0;     // 100 * (post - pre) / post
  double standard = 0.0;  // 100 * (post - pre) / pre
};

/// Throws kNonPositiveWer unless both WERs are positive.
RelativeChange ComputeRelativeChange(double pre_wer, double post_wer);

/// "WER 12.50 [ 5 / 40, 1 ins, 2 del, 2 sub ]"
std::string FormatWerLine(const WerBreakdown &wer);

}  // namespace latrescore

#endif  // LATRESCORE_WER_H_
