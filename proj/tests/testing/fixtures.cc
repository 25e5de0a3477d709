// testing/fixtures.cc

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

#include "testing/fixtures.h"

#include <sstream>

namespace latrescore {
namespace testing {

Lattice MakeL1() {
  std::vector<Arc> arcs = {
      {0, 1, "a", -1.0, -1.0, {}},
      {0, 2, "b", -2.5, -0.3, {}},
      {1, 3, "c", -1.0, -1.0, {}},
      {2, 3, "c", -1.0, -0.4, {}},
  };
  return Lattice(4, 0, {{3, 0.0}}, arcs, {"utt1", AmKind::kUnknown,
                                          AlignmentKind::kUnknown});
}

std::string L1Text() {
  return "utt1\n"
         "# meta: am=UNKNOWN align=unknown\n"
         "0 1 a 1.000000,1.000000\n"
         "0 2 b 0.300000,2.500000\n"
         "1 3 c 1.000000,1.000000\n"
         "2 3 c 0.400000,1.000000\n"
         "3 0.000000\n"
         "\n";
}

Lattice MakeL2() {
  std::vector<Arc> arcs = {
      {0, 2, "hi", -3.0, -0.5, {}},
      {0, 1, "h", -1.0, -0.5, {}},
      {1, 2, "i", -1.0, -0.5, {}},
  };
  return Lattice(3, 0, {{2, 0.0}}, arcs, {"utt2", AmKind::kUnknown,
                                          AlignmentKind::kUnknown});
}

std::vector<Sentence> SplitSentences(const std::vector<std::string> &lines) {
  std::vector<Sentence> out;
  for (const std::string &line : lines) {
    std::istringstream is(line);
    Sentence s;
    std::string w;
    while (is >> w) s.push_back(w);
    out.push_back(s);
  }
  return out;
}

std::vector<Sentence> TwoSentenceCorpus() {
  return SplitSentences({"a b", "a c"});
}

namespace {

// first -> (right | wrong) -> last; the wrong word is 0.5 better acoustically.
Lattice Confusable(const std::string &utt, const std::string &first,
                   const std::string &right, const std::string &wrong,
                   const std::string &last) {
  std::vector<Arc> arcs = {
      {0, 1, first, -2.0, -2.0, {}},
      {1, 2, right, -3.0, -2.0, {}},
      {1, 2, wrong, -2.5, -2.0, {}},
      {2, 3, last, -2.0, -2.0, {}},
  };
  return Lattice(4, 0, {{3, 0.0}}, arcs,
                 {utt, AmKind::kDnn, AlignmentKind::kPhoneThenWord});
}

}  // namespace

CorrectionFixture MakeCorrectionFixture() {
  CorrectionFixture f;
  f.lattices = {
      Confusable("fix1", "the", "cat", "hat", "sat"),
      Confusable("fix2", "a", "dog", "fog", "ran"),
      Confusable("fix3", "my", "hat", "cat", "fell"),
  };
  f.refs = {
      {"fix1", {"the", "cat", "sat"}},
      {"fix2", {"a", "dog", "ran"}},
      {"fix3", {"my", "hat", "fell"}},
  };
  f.lm_corpus = SplitSentences({"the cat sat", "a dog ran", "my hat fell",
                                "the fog lifted"});
  return f;
}

}  // namespace testing
}  // namespace latrescore
