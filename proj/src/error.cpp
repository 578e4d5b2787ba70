#include "pex/error.hpp"

namespace pex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotOneHot: return "NotOneHot";
    case ErrorCode::kInvalidThresholds: return "InvalidThresholds";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedPgm: return "MalformedPgm";
    case ErrorCode::kPoseOutOfBounds: return "PoseOutOfBounds";
    case ErrorCode::kPoseInObstacle: return "PoseInObstacle";
    case ErrorCode::kCellOutOfBounds: return "CellOutOfBounds";
    case ErrorCode::kEmptyPath: return "EmptyPath";
    case ErrorCode::kConnectionFailed: return "ConnectionFailed";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kRemoteError: return "RemoteError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kEmptyClusters: return "EmptyClusters";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kNoFreeCells: return "NoFreeCells";
    case ErrorCode::kTooSmall: return "TooSmall";
  }
  return "Unknown";
}

}  // namespace pex
