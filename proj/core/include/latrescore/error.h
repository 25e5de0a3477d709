// latrescore/error.h

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

#ifndef LATRESCORE_ERROR_H_
#define LATRESCORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace latrescore {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidLattice,
  kCyclicLattice,
  kMalformedPath,
  kNoPath,
  kEmptyCorpus,
  kNonFiniteScore,
  kInvalidProbability,
  kScorerUnavailable,
  kParseError,
  kValidationError,
  kKeyNotFound,
  kOffsetMismatch,
  kDuplicateKey,
  kMissingReference,
  kNonPositiveWer,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

/// All failures raised by the library.  The code identifies the failure class;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// A grammar violation in a text input, with a 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string &reason);

  int line() const { return line_; }
  const std::string &reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

}  // namespace latrescore

#endif  // LATRESCORE_ERROR_H_
