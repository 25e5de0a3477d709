// testing/oracles.h

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

// Brute-force reference implementations.  None of these call into the code
// they check: paths are enumerated by plain recursion over the arc list,
// Witten-Bell probabilities are recounted from the raw corpus on every query
// and edit distance is a memoized recursion over suffixes.

#ifndef LATRESCORE_TESTING_ORACLES_H_
#define LATRESCORE_TESTING_ORACLES_H_

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "latrescore/lattice.h"
#include "latrescore/ngram-lm.h"

namespace latrescore {
namespace testing {

struct EnumeratedPath {
  std::vector<ArcId> arcs;
  std::vector<std::string> words;
  double acoustic = 0.0;
  double lm = 0.0;
  double final_score = 0.0;

  std::int32_t word_count() const {
    return static_cast<std::int32_t>(words.size());
  }
};

// Every complete path, in no particular order.
std::vector<EnumeratedPath> EnumeratePaths(const Lattice &lat);

double OracleCombined(const EnumeratedPath &p, const RescoreConfig &cfg);

// Sorted by the total path order: combined score descending, then word
// sequence, then arc count, then arc ids.
std::vector<EnumeratedPath> OracleRanked(const Lattice &lat,
                                         const RescoreConfig &cfg);

// (words, acoustic total, lm total) per path, sorted.
typedef std::tuple<std::vector<std::string>, double, double> PathTriple;
std::vector<PathTriple> PathTriples(const Lattice &lat);

// Witten-Bell probability recounted from the corpus, closed vocabulary of
// the corpus words plus </s> and <unk>.  context is the sentence prefix
// without <s>.
double OracleWittenBell(const std::vector<Sentence> &corpus, int order,
                        const std::vector<std::string> &context,
                        const std::string &word);

// Unit-cost Levenshtein distance.
std::int64_t OracleEditDistance(const std::vector<std::string> &ref,
                                const std::vector<std::string> &hyp);

}  // namespace testing
}  // namespace latrescore

#endif  // LATRESCORE_TESTING_ORACLES_H_
