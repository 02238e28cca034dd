#include "gcb/error.hpp"

namespace gcb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ModelMismatch: return "model-mismatch";
    case ErrorCode::DegenerateSegment: return "degenerate-segment";
    case ErrorCode::DegeneratePair: return "degenerate-pair";
    case ErrorCode::UnsupportedBoundary: return "unsupported-boundary";
    case ErrorCode::UnsupportedModel: return "unsupported-model";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::EmptyRegion: return "empty-region";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::InsufficientSample: return "insufficient-sample";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Fit: return "fit";
    case ErrorCode::Alignment: return "alignment";
    case ErrorCode::InvalidWeight: return "invalid-weight";
    case ErrorCode::GenerationDepth: return "generation-depth";
    case ErrorCode::DegenerateSubset: return "degenerate-subset";
    case ErrorCode::Basepoint: return "basepoint";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
  }
  return "unknown";
}

}  // namespace gcb
