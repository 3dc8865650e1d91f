#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdilate/dilation.hpp"
#include "qdilate/instruments.hpp"
#include "qdilate/linalg.hpp"

namespace qdilate {

/// Normal measurement model (K, P, U, xi): apparatus space C^app_dim with a
/// sharp pointer PVM, a measurement unitary on C^(sys_dim * app_dim) and a
/// pure probe vector. A model may carry one extra sink outcome whose
/// probability vanishes on every input state; it is always the last pointer
/// projection and is labelled "omega0".
struct NormalMeasurementModel {
  std::size_t sys_dim = 0;
  std::size_t app_dim = 0;
  std::vector<CMatrix> pointer_pvm;  // projections on the apparatus space
  CMatrix unitary;                   // (sys_dim * app_dim) square
  CVector probe;                     // unit vector in C^app_dim
  std::vector<std::string> outcome_labels;
  bool has_sink = false;

  std::size_t pointer_count() const noexcept { return pointer_pvm.size(); }
};

struct AugmentedModel {
  NormalMeasurementModel model;  // has_sink = true, sink is the last pointer
  std::size_t sink_index = 0;
};

struct ModelReport {
  double instrument_residual = 0.0;   // Heisenberg maps over matrix units
  double observable_residual = 0.0;   // effects of the measured observable
  double probability_residual = 0.0;  // Born statistics over probe states
  double sink_residual = 0.0;         // zero-map residual of the sink outcome
  bool pass = false;
};

struct EnvironmentReport {
  double channel_residual = 0.0;  // induced channel vs traced-out evolution
  std::size_t channel_rank = 0;   // Kraus rank of the induced channel
  // set for sink-free single-outcome instruments: app_dim == channel_rank
  std::optional<bool> env_dim_matches;
  bool pass = false;
};

/// Solves U(h_n (x) xi) = Y h_n by pairing deterministic orthonormal
/// completions of {h_n (x) xi} and of the isometry's columns.
CMatrix extend_to_unitary(const CMatrix& isometry, const CVector& xi, const Tolerance& tol = {});

/// Unitary dilation of a square contraction A to twice the dimension,
/// [[A, (I-AA*)^(1/2)], [(I-A*A)^(1/2), -A*]].
CMatrix halmos_dilation(const CMatrix& a, const Tolerance& tol = {});

/// Grows the apparatus by one dimension, embeds Y as Y+ psi = (Y psi, 0),
/// and adds a zero-probability sink outcome; the extension to a unitary
/// then always succeeds.
AugmentedModel augment_plus_one(const StinespringDilation& dil, const DiscreteInstrument& instr,
                                const Tolerance& tol = {});

/// Construction only (no instrument verification); used by the CLI.
AugmentedModel augment_dilation(const StinespringDilation& dil,
                                const std::optional<CVector>& xi = std::nullopt,
                                const Tolerance& tol = {});

/// Full pipeline minimize -> dilate -> extend. The probe defaults to the
/// first pointer basis vector; any unit vector of the apparatus works.
NormalMeasurementModel assemble_model(const DiscreteInstrument& instr,
                                      const std::optional<CVector>& xi = std::nullopt,
                                      const Tolerance& tol = {});

/// Checks the three defining identities of a normal measurement of the
/// instrument; pass iff all residuals <= eps_residual * (1 + d).
ModelReport verify_model(const NormalMeasurementModel& model, const DiscreteInstrument& instr,
                         const Tolerance& tol = {});

/// Compares the induced channel with tr_K[U (T (x) |xi><xi|) U*] over a
/// basis of inputs, and for single-outcome instruments checks that the
/// apparatus has exactly the channel's Kraus rank.
EnvironmentReport environment_channel_check(const NormalMeasurementModel& model,
                                            const DiscreteInstrument& instr,
                                            const Tolerance& tol = {});

/// Normal measurement of an observable with apparatus dimension exactly the
/// number of outcomes, through its rank-1 instrument.
NormalMeasurementModel minimal_observable_model(const DiscretePOVM& m, const Tolerance& tol = {});

/// Isometry psi -> psi (x) xi as a (d * k) x d matrix.
CMatrix probe_embedding(std::size_t sys_dim, const CVector& xi);

}  // namespace qdilate
