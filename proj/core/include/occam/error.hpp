#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace occam {

enum class ErrorCode {
  MalformedFile,
  NonFinite,
  WrongRank,
  LengthMismatch,
  NegativeLabel,
  OutOfRange,
  CapacityExceeded,
  EmptyGroup,
  UndefinedScore,
  KeyMismatch,
  TooFewModels,
  RankDeficient,
  NoSolution,
  InvalidSpec,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Process exit code for a failure of this kind: 2 for undefined scores, 1 otherwise.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace occam
