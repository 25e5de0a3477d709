// testing/fixtures.h

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

// Small hand-checkable lattices, corpora and the LM-correction fixture shared
// by the unit tests, the acceptance gate and the benchmarks.

#ifndef LATRESCORE_TESTING_FIXTURES_H_
#define LATRESCORE_TESTING_FIXTURES_H_

#include <string>
#include <vector>

#include "latrescore/lattice-io.h"
#include "latrescore/lattice.h"
#include "latrescore/ngram-lm.h"

namespace latrescore {
namespace testing {

// States {0,1,2,3}, start 0, final 3.  Paths "a c" (ac -2.0, lm -2.0) and
// "b c" (ac -3.5, lm -0.7).  Arc ids follow a1..a4.
Lattice MakeL1();

// Text form of MakeL1() as the canonical writer emits it.
std::string L1Text();

// States {0,1,2}, start 0, final 2.  Paths "hi" (ac -3.0, lm -0.5) and
// "h i" (ac -2.0, lm -1.0).
Lattice MakeL2();

// The two-sentence training corpus "a b", "a c".
std::vector<Sentence> TwoSentenceCorpus();

std::vector<Sentence> SplitSentences(const std::vector<std::string> &lines);

// Three utterances whose acoustics prefer a wrong middle word by a small
// margin while the lattice LM scores are tied, so raw decoding makes one
// substitution per utterance (3 / 9 words).  A bigram trained on lm_corpus
// repairs all three at every scale in {7,10,13} and WIP in {0,0.5,1}.
struct CorrectionFixture {
  std::vector<Lattice> lattices;
  Transcripts refs;
  std::vector<Sentence> lm_corpus;
};
CorrectionFixture MakeCorrectionFixture();

}  // namespace testing
}  // namespace latrescore

#endif  // LATRESCORE_TESTING_FIXTURES_H_
