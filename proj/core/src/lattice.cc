// core/src/lattice.cc

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

#include "latrescore/lattice.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "latrescore/error.h"

namespace latrescore {

bool CanonicalArcLess(const Arc &a, const Arc &b) {
  return std::tie(a.from, a.to, a.word, a.lm_score, a.acoustic_score,
                  a.phones) < std::tie(b.from, b.to, b.word, b.lm_score,
                                       b.acoustic_score, b.phones);
}

namespace {

void BuildIndex(StateId num_states, const std::vector<Arc> &arcs, bool by_from,
                std::vector<ArcId> *offsets, std::vector<ArcId> *index) {
  offsets->assign(num_states + 1, 0);
  for (const Arc &arc : arcs) (*offsets)[(by_from ? arc.from : arc.to) + 1]++;
  for (StateId s = 0; s < num_states; s++) (*offsets)[s + 1] += (*offsets)[s];
  index->assign(arcs.size(), 0);
  std::vector<ArcId> fill(offsets->begin(), offsets->end() - 1);
  for (ArcId a = 0; a < static_cast<ArcId>(arcs.size()); a++) {
    StateId s = by_from ? arcs[a].from : arcs[a].to;
    (*index)[fill[s]++] = a;
  }
}

}  // namespace

Lattice::Lattice(StateId num_states, StateId start,
                 std::map<StateId, double> finals, std::vector<Arc> arcs,
                 LatticeMeta meta)
    : num_states_(num_states),
      start_(start),
      finals_(std::move(finals)),
      arcs_(std::move(arcs)),
      meta_(std::move(meta)) {
  auto fail = [](const std::string &msg) {
    throw Error(ErrorCode::kInvalidLattice, msg);
  };
  if (num_states_ < 1) fail("lattice needs at least one state");
  if (start_ < 0 || start_ >= num_states_)
    fail("start state " + std::to_string(start_) + " out of range");
  for (const auto &[state, score] : finals_) {
    if (state < 0 || state >= num_states_)
      fail("final state " + std::to_string(state) + " out of range");
    if (!std::isfinite(score))
      fail("non-finite final score on state " + std::to_string(state));
  }
  for (size_t i = 0; i < arcs_.size(); i++) {
    const Arc &arc = arcs_[i];
    std::string where = "arc " + std::to_string(i);
    if (arc.from < 0 || arc.from >= num_states_ || arc.to < 0 ||
        arc.to >= num_states_)
      fail(where + ": state out of range");
    if (arc.word.empty()) fail(where + ": empty word label");
    if (!std::isfinite(arc.acoustic_score) || !std::isfinite(arc.lm_score))
      fail(where + ": non-finite score");
  }
  BuildIndex(num_states_, arcs_, true, &out_offsets_, &out_arcs_);
  BuildIndex(num_states_, arcs_, false, &in_offsets_, &in_arcs_);
}

std::optional<double> Lattice::FinalScore(StateId s) const {
  auto it = finals_.find(s);
  if (it == finals_.end()) return std::nullopt;
  return it->second;
}

std::span<const ArcId> Lattice::OutArcs(StateId s) const {
  return std::span<const ArcId>(out_arcs_).subspan(
      out_offsets_[s], out_offsets_[s + 1] - out_offsets_[s]);
}

std::span<const ArcId> Lattice::InArcs(StateId s) const {
  return std::span<const ArcId>(in_arcs_).subspan(
      in_offsets_[s], in_offsets_[s + 1] - in_offsets_[s]);
}

std::vector<Arc> Lattice::SortedArcs() const {
  std::vector<Arc> sorted = arcs_;
  std::sort(sorted.begin(), sorted.end(), CanonicalArcLess);
  return sorted;
}

Lattice Lattice::WithMeta(LatticeMeta meta) const {
  return Lattice(num_states_, start_, finals_, arcs_, std::move(meta));
}

bool Lattice::operator==(const Lattice &other) const {
  return num_states_ == other.num_states_ && start_ == other.start_ &&
         finals_ == other.finals_ && meta_ == other.meta_ &&
         SortedArcs() == other.SortedArcs();
}

void RescoreConfig::Check() const {
  if (!std::isfinite(lm_scale) || lm_scale < 0)
    throw Error(ErrorCode::kInvalidArgument, "lm_scale must be >= 0");
  if (!std::isfinite(wip) || wip < 0)
    throw Error(ErrorCode::kInvalidArgument, "wip must be >= 0");
  if (!std::isfinite(lm_interp) || lm_interp < 0 || lm_interp > 1)
    throw Error(ErrorCode::kInvalidArgument, "lm_interp must be in [0, 1]");
}

double CombinedScore(double acoustic_total, double lm_total,
                     std::int32_t word_count, double final_score,
                     const RescoreConfig &cfg) {
  return acoustic_total + cfg.lm_scale * lm_total - cfg.wip * word_count +
         final_score;
}

double ArcWeight(const Arc &arc, const RescoreConfig &cfg) {
  return arc.acoustic_score + cfg.lm_scale * arc.lm_score -
         (arc.IsEpsilon() ? 0.0 : cfg.wip);
}

}  // namespace latrescore
