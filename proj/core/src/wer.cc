// core/src/wer.cc

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

#include "latrescore/wer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "latrescore/error.h"

namespace latrescore {

std::vector<EditOp> Align(std::span<const std::string> ref,
                          std::span<const std::string> hyp) {
  const size_t n = ref.size(), m = hyp.size();
  // cost[i][j]: edit distance between ref[0, i) and hyp[0, j).
  std::vector<std::vector<std::int32_t>> cost(
      n + 1, std::vector<std::int32_t>(m + 1, 0));
  for (size_t i = 0; i <= n; i++) cost[i][0] = static_cast<std::int32_t>(i);
  for (size_t j = 0; j <= m; j++) cost[0][j] = static_cast<std::int32_t>(j);
  for (size_t i = 1; i <= n; i++) {
    for (size_t j = 1; j <= m; j++) {
      std::int32_t diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }
  std::vector<EditOp> ops;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool same = ref[i - 1] == hyp[j - 1];
      if (cost[i][j] == cost[i - 1][j - 1] + (same ? 0 : 1)) {
        ops.push_back(same ? EditOp::kMatch : EditOp::kSubstitution);
        i--;
        j--;
        continue;
      }
    }
    if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ops.push_back(EditOp::kDeletion);
      i--;
    } else {
      ops.push_back(EditOp::kInsertion);
      j--;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

double WerBreakdown::wer_percent() const {
  if (ref_words <= 0)
    throw Error(ErrorCode::kInvalidArgument, "WER needs reference words");
  return 100.0 * static_cast<double>(errors()) / static_cast<double>(ref_words);
}

WerBreakdown &WerBreakdown::operator+=(const WerBreakdown &other) {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  ref_words += other.ref_words;
  return *this;
}

WerBreakdown CountEdits(std::span<const EditOp> ops) {
  WerBreakdown w;
  for (EditOp op : ops) {
    switch (op) {
      case EditOp::kMatch: w.ref_words++; break;
      case EditOp::kSubstitution: w.substitutions++; w.ref_words++; break;
      case EditOp::kDeletion: w.deletions++; w.ref_words++; break;
      case EditOp::kInsertion: w.insertions++; break;
    }
  }
  return w;
}

WerBreakdown ComputeWer(std::span<const std::string> ref,
                        std::span<const std::string> hyp) {
  std::vector<EditOp> ops = Align(ref, hyp);
  return CountEdits(ops);
}

WerBreakdown CorpusWer(const Transcripts &refs, const Transcripts &hyps) {
  WerBreakdown total;
  for (const auto &[key, hyp] : hyps) {
    auto it = refs.find(key);
    if (it == refs.end())
      throw Error(ErrorCode::kMissingReference, "no reference for '" + key + "'");
    total += ComputeWer(it->second, hyp);
  }
  return total;
}

RelativeChange ComputeRelativeChange(double pre_wer, double post_wer) {
  if (!(pre_wer > 0.0) || !(post_wer > 0.0) || !std::isfinite(pre_wer) ||
      !std::isfinite(post_wer))
    throw Error(ErrorCode::kNonPositiveWer,
                "relative change needs positive WERs");
  RelativeChange c;
  c.paper = 100.0 * (post_wer - pre_wer) / post_wer;
  c.standard = 100.0 * (post_wer - pre_wer) / pre_wer;
  return c;
}

std::string FormatWerLine(const WerBreakdown &wer) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "WER %.2f [ %lld / %lld, %lld ins, %lld del, %lld sub ]",
                wer.wer_percent(),
                static_cast<long long>(wer.errors()),
                static_cast<long long>(wer.ref_words),
                static_cast<long long>(wer.insertions),
                static_cast<long long>(wer.deletions),
                static_cast<long long>(wer.substitutions));
  return buf;
}

}  // namespace latrescore
