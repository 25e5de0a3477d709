// core/src/sweep.cc

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

#include "latrescore/sweep.h"

#include <cstdio>
#include <sstream>

#include "latrescore/error.h"
#include "latrescore/lattice-algo.h"
#include "latrescore/rescore.h"

namespace latrescore {

namespace {

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string Pad(const std::string &s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void AddHypothesis(Transcripts *out, const Lattice &lat,
                   std::vector<std::string> words) {
  const std::string &key = lat.meta().utterance_id;
  if (!out->emplace(key, std::move(words)).second)
    throw Error(ErrorCode::kDuplicateKey, "duplicate utterance '" + key + "'");
}

}  // namespace

const SweepCell *SweepReport::Find(const std::string &test_set,
                                   double lm_scale, double wip) const {
  for (const SweepCell &c : cells)
    if (c.test_set == test_set && c.lm_scale == lm_scale && c.wip == wip)
      return &c;
  return nullptr;
}

std::string SweepReport::ToCsv() const {
  std::string out =
      "test_set,lm_scale,wip,wer,subs,ins,dels,ref_words,change_paper,"
      "change_standard\n";
  for (const SweepCell &c : cells) {
    const WerBreakdown &w = c.reported();
    out += c.test_set + ',' + Short(c.lm_scale) + ',' + Short(c.wip) + ',' +
           Fixed2(w.wer_percent()) + ',' + std::to_string(w.substitutions) +
           ',' + std::to_string(w.insertions) + ',' +
           std::to_string(w.deletions) + ',' + std::to_string(w.ref_words) +
           ',' + (c.change ? Fixed2(c.change->paper) : "NA") + ',' +
           (c.change ? Fixed2(c.change->standard) : "NA") + '\n';
  }
  return out;
}

std::string SweepReport::ToTable() const {
  const bool has_post = !cells.empty() && cells.front().post.has_value();
  const size_t col = has_post ? 16 : 8;
  std::ostringstream os;
  for (const std::string &set : test_sets) {
    os << "test set: " << set << '\n';
    os << Pad("LM Scale", 10);
    for (double wip : wips) os << "| " << Pad("WIP " + Short(wip), col);
    os << '\n' << Pad("", 10);
    for (size_t i = 0; i < wips.size(); i++)
      os << "| " << Pad(has_post ? "pre     post" : "raw", col);
    os << '\n';
    for (double scale : scales) {
      os << Pad(Short(scale), 10);
      for (double wip : wips) {
        const SweepCell *c = Find(set, scale, wip);
        std::string text = Pad(Fixed2(c->pre.wer_percent()), 8);
        if (has_post) text += Fixed2(c->post->wer_percent());
        os << "| " << Pad(text, col);
      }
      os << '\n';
    }
    os << '\n';
  }
  return os.str();
}

Transcripts DecodeBest(std::span<const Lattice> lattices, const SweepLm &lm,
                       const RescoreConfig &cfg) {
  Transcripts out;
  for (const Lattice &lat : lattices) {
    if (lm.ngram != nullptr) {
      AddHypothesis(&out, lat, BestPath(RescoreLattice(lat, *lm.ngram, cfg), cfg).words);
    } else if (lm.scorer != nullptr) {
      NBestList list = RescoreNBest(lat, *lm.scorer, lm.nbest_k, cfg);
      AddHypothesis(&out, lat, list.hypotheses.front().words);
    } else {
      AddHypothesis(&out, lat, BestPath(lat, cfg).words);
    }
  }
  return out;
}

SweepReport Sweep(std::span<const TestSet> sets, const Transcripts &refs,
                  std::span<const double> scales, std::span<const double> wips,
                  const SweepLm &lm, const RescoreConfig &base) {
  if (sets.empty() || scales.empty() || wips.empty())
    throw Error(ErrorCode::kInvalidArgument, "sweep grid is empty");
  SweepReport report;
  report.scales.assign(scales.begin(), scales.end());
  report.wips.assign(wips.begin(), wips.end());
  for (const TestSet &set : sets) {
    report.test_sets.push_back(set.name);
    for (const Lattice &lat : set.lattices) {
      ValidationReport v = Validate(lat);
      if (!v.ok())
        throw Error(ErrorCode::kValidationError,
                    "lattice '" + lat.meta().utterance_id + "': " + v.ToString());
    }
    // The rescored lattice depends only on lm_interp, so it is shared by all
    // cells of the set.
    std::vector<Lattice> rescored;
    if (lm.ngram != nullptr) {
      for (const Lattice &lat : set.lattices)
        rescored.push_back(RescoreLattice(lat, *lm.ngram, base));
    }
    for (double scale : scales) {
      for (double wip : wips) {
        RescoreConfig cfg = base;
        cfg.lm_scale = scale;
        cfg.wip = wip;
        cfg.Check();
        SweepCell cell;
        cell.test_set = set.name;
        cell.lm_scale = scale;
        cell.wip = wip;
        cell.pre = CorpusWer(refs, DecodeBest(set.lattices, SweepLm{}, cfg));
        if (lm.ngram != nullptr) {
          cell.post = CorpusWer(refs, DecodeBest(rescored, SweepLm{}, cfg));
        } else if (lm.scorer != nullptr) {
          cell.post = CorpusWer(refs, DecodeBest(set.lattices, lm, cfg));
        }
        if (cell.post) {
          double pre = cell.pre.wer_percent(), post = cell.post->wer_percent();
          if (pre > 0.0 && post > 0.0) cell.change = ComputeRelativeChange(pre, post);
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

}  // namespace latrescore
