#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qdilate/linalg.hpp"
#include "qdilate/observables.hpp"

namespace qdilate {

using KrausList = std::vector<CMatrix>;

/// Discrete N-outcome instrument in Kraus form. The total map over all
/// outcomes is a channel: sum_{i,s} A_is* A_is = I.
struct DiscreteInstrument {
  std::size_t dim = 0;
  std::vector<KrausList> outcomes;

  std::size_t outcome_count() const noexcept { return outcomes.size(); }
};

struct KrausRankVector {
  std::vector<std::size_t> ranks;
  std::size_t total = 0;
};

/// phi_iks = A_is g_ik, satisfying sum_s <phi_iks|phi_ils> = delta_kl and
/// A_is = sum_k |phi_iks><d_ik|.
struct StructureVectors {
  // vectors[i][k][s]
  std::vector<std::vector<std::vector<CVector>>> vectors;
};

struct NoInfoReport {
  bool applicable = false;  // true when the induced channel has Kraus rank 1
  std::vector<double> probabilities;
  double max_residual = 0.0;  // max_i || M_i - p_i I ||_F when applicable
};

/// Checks the channel normalization and that every outcome carries at least
/// one non-negligible Kraus operator.
DiscreteInstrument validate_instrument(std::size_t dim, const std::vector<KrausList>& outcomes,
                                       const Tolerance& tol = {});

/// Heisenberg action over a set of outcomes: sum_{i in set, s} A_is* B A_is.
CMatrix apply_heisenberg(const DiscreteInstrument& instr, const std::vector<std::size_t>& outcome_set,
                         const CMatrix& b);

/// The observable measured by the instrument, M_i = sum_s A_is* A_is.
DiscretePOVM associated_observable(const DiscreteInstrument& instr, const Tolerance& tol = {});

/// Total state transformation: all Kraus operators concatenated.
KrausList induced_channel(const DiscreteInstrument& instr);

/// Reduces a Kraus list to a linearly independent one spanning the same
/// map, via the Gram matrix G_st = tr(A_s* A_t).
KrausList minimize_kraus(const KrausList& ops, const Tolerance& tol = {});

KrausRankVector kraus_rank_vector(const DiscreteInstrument& instr, const Tolerance& tol = {});

/// Instrument with each outcome's Kraus lists minimized in place.
DiscreteInstrument minimize_instrument(const DiscreteInstrument& instr, const Tolerance& tol = {});

StructureVectors structure_vectors(const DiscreteInstrument& instr, const EffectDecomposition& dec,
                                   const Tolerance& tol = {});

/// Rank-1 instrument with Kraus operators sqrt(M_i).
DiscreteInstrument luders_instrument(const DiscretePOVM& m, const Tolerance& tol = {});

/// Rank-1 instrument A_i = sum_k |phi_ik><d_ik| for caller-chosen orthonormal
/// vectors phi_ik (one per eigencomponent of M_i).
DiscreteInstrument rank1_instrument_with_vectors(const DiscretePOVM& m,
                                                 const std::vector<std::vector<CVector>>& phi,
                                                 const Tolerance& tol = {});

/// When the induced channel is isometric (Kraus rank 1) the associated
/// observable carries no information about the state; checks and reports it.
NoInfoReport check_no_info_without_disturbance(const DiscreteInstrument& instr,
                                               const Tolerance& tol = {});

}  // namespace qdilate
