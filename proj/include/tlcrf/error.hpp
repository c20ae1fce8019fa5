#pragma once

#include <stdexcept>
#include <string>

namespace tlcrf {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch,
  NonContiguousRegionIds,
  InvalidProbabilities,
  InvalidFloor,
  NoEdges,
  LabelOutOfRange,
  InstanceTooLarge,
  ShapeMismatch,
  EmptyMatrix,
  BadMagic,
  TruncatedFile,
  BadHeader,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type thrown by every library routine. The code is what the C API
/// reports as its status; the message is free text for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Writes a warning line to standard error.
void warn(const std::string& message);

}  // namespace tlcrf
