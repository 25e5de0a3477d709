// core/src/rescore.cc

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

#include "latrescore/rescore.h"

#include <algorithm>
#include <cmath>

#include "latrescore/error.h"
#include "latrescore/lattice-algo.h"

namespace latrescore {

double EffectiveLm(double original_lm, double new_lm,
                   const RescoreConfig &cfg) {
  return (1.0 - cfg.lm_interp) * original_lm + cfg.lm_interp * new_lm;
}

double CombineArcScore(double acoustic, double original_lm, double new_lm,
                       const RescoreConfig &cfg, bool is_word) {
  if (!std::isfinite(acoustic) || !std::isfinite(original_lm) ||
      !std::isfinite(new_lm))
    throw Error(ErrorCode::kNonFiniteScore, "arc score is not finite");
  cfg.Check();
  return acoustic + cfg.lm_scale * EffectiveLm(original_lm, new_lm, cfg) -
         (is_word ? cfg.wip : 0.0);
}

Lattice RescoreLattice(const Lattice &lat, const NGramLM &lm,
                       const RescoreConfig &cfg) {
  cfg.Check();
  TopoOrder(lat);  // throws on cycles before anything else
  ExpandedLattice expanded = ExpandWithHistories(Connect(lat), lm.order());
  const Lattice &ex = expanded.lattice;

  std::vector<Arc> arcs;
  arcs.reserve(ex.num_arcs() + ex.finals().size());
  for (const Arc &arc : ex.arcs()) {
    Arc out = arc;
    double new_lm = 0.0;
    if (!arc.IsEpsilon())
      new_lm = lm.ScoreWord(expanded.histories[arc.from], arc.word);
    out.lm_score = EffectiveLm(arc.lm_score, new_lm, cfg);
    arcs.push_back(std::move(out));
  }
  StateId num_states = ex.num_states();
  std::map<StateId, double> finals;
  for (const auto &[state, final_score] : ex.finals()) {
    double end_lm = lm.ScoreWord(expanded.histories[state], kEos);
    Arc end;
    end.from = state;
    end.to = num_states;
    end.word = std::string(kEpsilon);
    end.lm_score = EffectiveLm(0.0, end_lm, cfg);
    arcs.push_back(std::move(end));
    finals[num_states++] = final_score;
  }
  return Lattice(num_states, ex.start(), std::move(finals), std::move(arcs),
                 lat.meta());
}

NBestList RescoreNBest(const Lattice &lat, const LmScorer &scorer, int k,
                       const RescoreConfig &cfg) {
  std::vector<LatticePath> paths = NBest(lat, k, cfg, false);
  NBestList list;
  list.utterance_id = lat.meta().utterance_id;
  for (size_t i = 0; i < paths.size(); i++) {
    LatticePath &path = paths[i];
    Hypothesis hyp;
    hyp.acoustic_total = path.score.acoustic_total;
    hyp.original_lm_total = path.score.lm_total;
    hyp.word_count = path.score.word_count;
    hyp.final_score = path.score.final_score;
    hyp.new_lm_total = scorer.ScoreSequence(path.words);
    if (!std::isfinite(hyp.new_lm_total))
      throw Error(ErrorCode::kNonFiniteScore,
                  "scorer returned a non-finite sequence score");
    hyp.combined = CombinedScore(
        hyp.acoustic_total,
        EffectiveLm(hyp.original_lm_total, hyp.new_lm_total, cfg),
        hyp.word_count, hyp.final_score, cfg);
    hyp.words = std::move(path.words);
    hyp.rank_before = static_cast<std::int32_t>(i + 1);
    list.hypotheses.push_back(std::move(hyp));
  }
  std::sort(list.hypotheses.begin(), list.hypotheses.end(),
            [](const Hypothesis &a, const Hypothesis &b) {
              if (a.combined != b.combined) return a.combined > b.combined;
              if (a.words != b.words) return a.words < b.words;
              return a.rank_before < b.rank_before;
            });
  for (size_t i = 0; i < list.hypotheses.size(); i++)
    list.hypotheses[i].rank_after = static_cast<std::int32_t>(i + 1);
  return list;
}

std::vector<double> ConvertNeuralScores(std::span<const double> raw,
                                        ScoreKind kind) {
  std::vector<double> out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); i++) {
    double v = raw[i];
    std::string where = "score " + std::to_string(i);
    if (!std::isfinite(v))
      throw Error(ErrorCode::kInvalidProbability, where + " is not finite");
    if (kind == ScoreKind::kProbability) {
      if (v <= 0.0 || v > 1.0)
        throw Error(ErrorCode::kInvalidProbability,
                    where + " is not a probability in (0, 1]");
      out.push_back(std::log(v));
    } else {
      if (v > 0.0)
        throw Error(ErrorCode::kInvalidProbability,
                    where + " is a positive log-probability");
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace latrescore
