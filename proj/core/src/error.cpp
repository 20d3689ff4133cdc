#include "occam/error.hpp"

namespace occam {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::WrongRank: return "WrongRank";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeLabel: return "NegativeLabel";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::UndefinedScore: return "UndefinedScore";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::TooFewModels: return "TooFewModels";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  return code == ErrorCode::UndefinedScore ? 2 : 1;
}

}  // namespace occam
