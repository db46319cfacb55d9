//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_ERROR_HPP_
#define EAGQA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eagqa {

enum class ErrorCode {
  kParse,
  kValidation,
  kSingularConfiguration,
  kProjection,
  kFrameMismatch,
  kNotFound,
  kAlreadyComplete,
  kInsufficientData,
  kMissingVariable,
  kDegenerateEvidence,
  kConfiguration,
  kIncompleteScene,
  kTeamPartition,
  kMissingSoccer,
  kUnsupportedStructure,
  kConnectivity,
  kUnsupportedFunction,
  kOracleTooLarge,
  kIo,
  kInternal,
};

// Coarse grouping used for process exit codes.
enum class ErrorFamily {
  kInput = 3,
  kValidation = 4,
  kGeometry = 5,
  kGraph = 6,
  kInference = 7,
  kQuery = 8,
  kIo = 9,
  kInternal = 10,
};

ErrorFamily family_of(ErrorCode code) noexcept;
std::string_view to_string(ErrorCode code) noexcept;
std::string_view to_string(ErrorFamily family) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorFamily family() const noexcept { return family_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace eagqa

#endif  // EAGQA_ERROR_HPP_
