#include "qdilate/error.hpp"

namespace qdilate {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::TooManyVectors: return "TooManyVectors";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ZeroEffect: return "ZeroEffect";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::TheoremViolation: return "TheoremViolation";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::InconsistentCorank: return "InconsistentCorank";
    case ErrorCode::EmptyObservable: return "EmptyObservable";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
  }
  return "UnknownError";
}

}  // namespace qdilate
