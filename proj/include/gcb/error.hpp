#pragma once

#include <stdexcept>
#include <string>

namespace gcb {

enum class ErrorCode {
  ModelMismatch,
  DegenerateSegment,
  DegeneratePair,
  UnsupportedBoundary,
  UnsupportedModel,
  Capacity,
  EmptyRegion,
  Configuration,
  InsufficientSample,
  Domain,
  Fit,
  Alignment,
  InvalidWeight,
  GenerationDepth,
  DegenerateSubset,
  Basepoint,
  Parse,
  Validation,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the toolkit carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gcb
