#include "deflator/error.hpp"

namespace deflator {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ZeroCost: return "ZeroCost";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::NoArbitrageViolation: return "NoArbitrageViolation";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NotCoarser: return "NotCoarser";
    case ErrorCode::NotClosedOut: return "NotClosedOut";
    case ErrorCode::NotSelfFinancing: return "NotSelfFinancing";
    case ErrorCode::DeflatorZeroBlock: return "DeflatorZeroBlock";
    case ErrorCode::NonpositiveRate: return "NonpositiveRate";
    case ErrorCode::MissingMaturity: return "MissingMaturity";
    case ErrorCode::NonPredictableDeflator: return "NonPredictableDeflator";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::TruncationFailure: return "TruncationFailure";
    case ErrorCode::ArbitrageInInput: return "ArbitrageInInput";
  }
  return "Unknown";
}

}  // namespace deflator
