#pragma once

#include <stdexcept>
#include <string>

namespace consensus_lab {

enum class ErrorCode {
  kIndexOutOfRange,
  kNonPositiveWeight,
  kDuplicateEdge,
  kSelfLoop,
  kInvalidArgument,
  kNoConvergence,
  kMarginalStability,
  kStepsizeOutOfRange,
  kNoRoot,
  kConfigMismatch,
  kLengthMismatch,
  kInsufficientData,
  kParseError,
};

/// Library error. `code()` identifies the contract violation so callers
/// (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace consensus_lab
