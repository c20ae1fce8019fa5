#include "tlcrf/error.hpp"

#include <iostream>
#include <mutex>

namespace tlcrf {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonContiguousRegionIds: return "NonContiguousRegionIds";
    case ErrorCode::InvalidProbabilities: return "InvalidProbabilities";
    case ErrorCode::InvalidFloor: return "InvalidFloor";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void warn(const std::string& message) {
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::cerr << "tlcrf warning: " << message << '\n';
}

}  // namespace tlcrf
