#pragma once

#include <stdexcept>
#include <string>

namespace dgm {

enum class ErrorCode {
  DimensionMismatch,
  EmptyGraph,
  RankDeficient,
  TooFewSamples,
  EmptyNeighborhood,
  InstanceTooLarge,
  InvalidAssignment,
  NoPositives,
  NoNegatives,
  EigenFailure,
  ConfigInvalid,
  BadMagic,
  VersionUnsupported,
  TruncatedFile,
  IoError,
};

/// Library-wide exception. `code()` distinguishes input/format problems
/// from numerical failures so the CLI can map them to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool numerical() const noexcept {
    switch (code_) {
      case ErrorCode::RankDeficient:
      case ErrorCode::EigenFailure:
      case ErrorCode::NoPositives:
      case ErrorCode::NoNegatives:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace dgm
