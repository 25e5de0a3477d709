// latrescore/lattice-io.h

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

// Text lattices and the ark/scp container.
//
// One lattice in text form:
//
//   utt1
//   # meta: am=DNN align=phone-word
//   0 1 a 1.000000,1.000000
//   0 2 b 0.300000,2.500000,b_ih
//   1 3 c 1.000000,1.000000
//   2 3 c 0.500000,1.000000
//   3 0.000000
//   <empty line>
//
// Arc lines are `from to word graph_cost,acoustic_cost[,phones]`, phones
// joined by '_'.  Costs are negated log scores.  Final lines are
// `state [cost]`.  The start state is the source of the first arc line (or
// the first final state if there are no arcs).  An ark is a concatenation of
// such blocks; an scp line is `key<TAB>ark_path:byte_offset`.

#ifndef LATRESCORE_LATTICE_IO_H_
#define LATRESCORE_LATTICE_IO_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latrescore/lattice.h"

namespace latrescore {

/// Parses exactly one lattice.  Throws ParseError (1-based line numbers,
/// offset by first_line - 1) and, when validate is set, kValidationError.
Lattice ParseLatticeText(std::string_view text, bool validate = true,
                         int first_line = 1);

/// Canonical form: meta line always present, start state's arcs first and
/// then arcs in canonical order, fixed 6-decimal costs.
std::string WriteLatticeText(const Lattice &lat);

/// Fixed 6 decimals, no exponent, "-0.000000" normalized to "0.000000".
std::string FormatCost(double cost);

struct ScpEntry {
  std::string key;
  std::string ark_path;
  std::uint64_t offset = 0;

  bool operator==(const ScpEntry &other) const = default;
};

struct ScpIndex {
  std::vector<ScpEntry> entries;

  /// nullptr if absent.
  const ScpEntry *Find(std::string_view key) const;
};

/// Throws ParseError, kDuplicateKey, kIoError.  Offsets must be strictly
/// increasing per ark path.
ScpIndex ReadScp(const std::string &path);
ScpIndex ParseScp(std::string_view text);
std::string WriteScpText(const ScpIndex &index);
void WriteScp(const std::string &path, const ScpIndex &index);

/// Writes each lattice's canonical text keyed by its utterance id and returns
/// the matching index.  Throws kDuplicateKey, kIoError.
ScpIndex WriteArk(const std::string &ark_path,
                  std::span<const Lattice> lattices);

/// Seeks straight to the indexed offset.  Throws kKeyNotFound,
/// kOffsetMismatch (the bytes at the offset are not the key line),
/// ParseError, kIoError.  Relative ark paths that do not exist as given are
/// resolved against scp_dir when it is non-empty.
Lattice ReadArkEntry(const ScpIndex &index, std::string_view key,
                     const std::string &scp_dir = "");

/// Reads all entries of an ark in order.
std::vector<Lattice> ReadArk(const std::string &ark_path, bool validate = true);

/// Loads lattices from an .scp (index order) or an ark file (file order).
std::vector<Lattice> ReadLattices(const std::string &path, bool validate = true);

typedef std::map<std::string, std::vector<std::string>> Transcripts;

/// `key w1 w2 ...` per line; a key alone is an empty transcript; blank lines
/// are skipped.  Throws kDuplicateKey, ParseError, kIoError.
Transcripts ParseTranscripts(std::string_view text);
Transcripts ReadTranscripts(const std::string &path);

/// `key w1 w2 ...`; no trailing space for empty word lists.
std::string FormatTranscriptLine(const std::string &key,
                                 std::span<const std::string> words);

}  // namespace latrescore

#endif  // LATRESCORE_LATTICE_IO_H_
