#pragma once

#include <stdexcept>
#include <string>

namespace dsq {

// Failure taxonomy shared by all modules. Validation codes reject malformed
// input; computation codes signal numerical failure on well-formed input.
// The CLI maps the two classes to distinct exit codes.
enum class ErrorCode {
  NonSquare,
  NegativeEntry,
  ColumnSumViolation,
  DimensionMismatch,
  InvalidArgument,
  SinkhornNotConverged,
  ComputationFailed,
  NotDensityMatrix,
  InvalidKrausSet,
  InvalidProjectorSet,
  NotDoublyStochastic,
  NotUnitary,
  NotBistochastic,
  UnitarityCheckFailed,
  NoPerfectMatching,
  TermLimitExceeded,
  UnknownCommand,
  BadFlag,
  FileNotFound,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Validation errors are caused by bad input; everything else is a
  // failure of the computation itself.
  bool is_validation() const noexcept {
    switch (code_) {
      case ErrorCode::SinkhornNotConverged:
      case ErrorCode::ComputationFailed:
      case ErrorCode::UnitarityCheckFailed:
      case ErrorCode::TermLimitExceeded:
        return false;
      default:
        return true;
    }
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ColumnSumViolation: return "ColumnSumViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SinkhornNotConverged: return "SinkhornNotConverged";
    case ErrorCode::ComputationFailed: return "ComputationFailed";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::InvalidKrausSet: return "InvalidKrausSet";
    case ErrorCode::InvalidProjectorSet: return "InvalidProjectorSet";
    case ErrorCode::NotDoublyStochastic: return "NotDoublyStochastic";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotBistochastic: return "NotBistochastic";
    case ErrorCode::UnitarityCheckFailed: return "UnitarityCheckFailed";
    case ErrorCode::NoPerfectMatching: return "NoPerfectMatching";
    case ErrorCode::TermLimitExceeded: return "TermLimitExceeded";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::FileNotFound: return "FileNotFound";
  }
  return "Unknown";
}

}  // namespace dsq
