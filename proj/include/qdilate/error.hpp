#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qdilate {

enum class ErrorCode {
  // matrix kernel
  NotSquare,
  NotHermitian,
  NoConvergence,
  NotOrthonormal,
  TooManyVectors,
  DimensionMismatch,
  // observables
  NotPositive,
  NotNormalized,
  ZeroEffect,
  // instruments
  AllZero,
  ReconstructionFailed,
  CountMismatch,
  TheoremViolation,
  // models
  NotIsometry,
  NotUnitVector,
  NotContraction,
  // simulation
  ZeroProbabilityOutcome,
  // symbolic
  NotInjective,
  InconsistentCorank,
  EmptyObservable,
  // generic / interchange
  InvalidInput,
  MalformedDocument,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception. `index()` carries the offending outcome/effect
/// index when one exists (e.g. NotPositive(i)).
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}
  Error(ErrorCode code, const std::string& message, std::size_t index)
      : std::runtime_error(std::string(error_code_name(code)) + "(" + std::to_string(index) +
                           "): " + message),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::size_t>& index() const noexcept { return index_; }

private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace qdilate
