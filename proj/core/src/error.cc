// core/src/error.cc

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

#include "latrescore/error.h"

namespace latrescore {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidLattice: return "InvalidLattice";
    case ErrorCode::kCyclicLattice: return "CyclicLattice";
    case ErrorCode::kMalformedPath: return "MalformedPath";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kKeyNotFound: return "KeyNotFound";
    case ErrorCode::kOffsetMismatch: return "OffsetMismatch";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kNonPositiveWer: return "NonPositiveWer";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

ParseError::ParseError(int line, const std::string &reason)
    : Error(ErrorCode::kParseError,
            "line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(reason) {}

}  // namespace latrescore
