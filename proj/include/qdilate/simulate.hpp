#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qdilate/instruments.hpp"
#include "qdilate/models.hpp"
#include "qdilate/observables.hpp"

namespace qdilate {

struct QuantumState {
  std::size_t dim = 0;
  CMatrix matrix;
};

/// Validates Hermiticity, positivity and unit trace.
QuantumState validate_state(const CMatrix& rho, const Tolerance& tol = {});

std::vector<double> born_probabilities(const DiscretePOVM& m, const QuantumState& rho,
                                       const Tolerance& tol = {});

/// Normalized post-measurement state of an outcome with non-negligible
/// probability.
QuantumState post_state(const DiscreteInstrument& instr, const QuantumState& rho,
                        std::size_t outcome, const Tolerance& tol = {});

struct CompositeResult {
  std::vector<double> probabilities;
  // absent when the outcome probability is below eps_rank
  std::vector<std::optional<QuantumState>> post_states;
};

/// Evolves rho (x) |xi><xi| through U, reads the pointer, and returns the
/// outcome distribution with conditional post-measurement system states.
CompositeResult run_composite(const NormalMeasurementModel& model, const QuantumState& rho,
                              const Tolerance& tol = {});

struct ShotRecord {
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> counts;
  std::vector<double> frequencies;
};

/// Draws i.i.d. outcomes from the composite distribution with the
/// splitmix64 generator and inverse-CDF sampling; identical inputs give
/// identical records on every platform.
ShotRecord sample(const NormalMeasurementModel& model, const QuantumState& rho, std::size_t shots,
                  std::uint64_t seed, const Tolerance& tol = {});

}  // namespace qdilate
