#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pex {

enum class ErrorCode {
  kInvalidArgument,
  kNotOneHot,
  kInvalidThresholds,
  kGridMismatch,
  kIoError,
  kMalformedPgm,
  kPoseOutOfBounds,
  kPoseInObstacle,
  kCellOutOfBounds,
  kEmptyPath,
  kConnectionFailed,
  kProtocolViolation,
  kRemoteError,
  kTimeout,
  kEmptyClusters,
  kNoPath,
  kConfigError,
  kNoFreeCells,
  kTooSmall,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (and tests) can branch on the kind rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix; for kRemoteError this is the text
  // the remote peer sent.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace pex
