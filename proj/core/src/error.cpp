//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/error.hpp"

namespace eagqa {

ErrorFamily family_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParse:
      return ErrorFamily::kInput;
    case ErrorCode::kValidation:
      return ErrorFamily::kValidation;
    case ErrorCode::kSingularConfiguration:
    case ErrorCode::kProjection:
    case ErrorCode::kFrameMismatch:
      return ErrorFamily::kGeometry;
    case ErrorCode::kNotFound:
    case ErrorCode::kAlreadyComplete:
      return ErrorFamily::kGraph;
    case ErrorCode::kInsufficientData:
    case ErrorCode::kMissingVariable:
    case ErrorCode::kDegenerateEvidence:
    case ErrorCode::kConfiguration:
    case ErrorCode::kIncompleteScene:
    case ErrorCode::kTeamPartition:
    case ErrorCode::kMissingSoccer:
    case ErrorCode::kUnsupportedStructure:
      return ErrorFamily::kInference;
    case ErrorCode::kConnectivity:
    case ErrorCode::kUnsupportedFunction:
    case ErrorCode::kOracleTooLarge:
      return ErrorFamily::kQuery;
    case ErrorCode::kIo:
      return ErrorFamily::kIo;
    case ErrorCode::kInternal:
      return ErrorFamily::kInternal;
  }
  return ErrorFamily::kInternal;
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kSingularConfiguration: return "singular_configuration";
    case ErrorCode::kProjection: return "projection";
    case ErrorCode::kFrameMismatch: return "frame_mismatch";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kAlreadyComplete: return "already_complete";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kMissingVariable: return "missing_variable";
    case ErrorCode::kDegenerateEvidence: return "degenerate_evidence";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kIncompleteScene: return "incomplete_scene";
    case ErrorCode::kTeamPartition: return "team_partition";
    case ErrorCode::kMissingSoccer: return "missing_soccer";
    case ErrorCode::kUnsupportedStructure: return "unsupported_structure";
    case ErrorCode::kConnectivity: return "connectivity";
    case ErrorCode::kUnsupportedFunction: return "unsupported_function";
    case ErrorCode::kOracleTooLarge: return "oracle_too_large";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

std::string_view to_string(ErrorFamily family) noexcept {
  switch (family) {
    case ErrorFamily::kInput: return "input";
    case ErrorFamily::kValidation: return "validation";
    case ErrorFamily::kGeometry: return "geometry";
    case ErrorFamily::kGraph: return "graph";
    case ErrorFamily::kInference: return "inference";
    case ErrorFamily::kQuery: return "query";
    case ErrorFamily::kIo: return "io";
    case ErrorFamily::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace eagqa
