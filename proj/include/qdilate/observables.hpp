#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qdilate/linalg.hpp"

namespace qdilate {

/// Discrete N-outcome observable: positive effects summing to the identity.
struct DiscretePOVM {
  std::size_t dim = 0;
  std::vector<CMatrix> effects;

  std::size_t outcome_count() const noexcept { return effects.size(); }
};

/// Rank-1 split of every effect, M_i = sum_k |d_ik><d_ik| with d_ik scaled
/// eigenvectors and duals g_ik = psi_ik / sqrt(lambda_ik).
struct EffectDecomposition {
  struct Outcome {
    std::vector<double> eigenvalues;  // lambda_ik in (0, 1], descending
    std::vector<CVector> eigenvectors;
    std::vector<CVector> d;  // sqrt(lambda) * eigenvector
    std::vector<CVector> g;  // eigenvector / sqrt(lambda)
    std::size_t rank() const noexcept { return eigenvalues.size(); }
  };
  std::size_t dim = 0;
  std::vector<Outcome> outcomes;

  std::vector<std::size_t> rank_vector() const {
    std::vector<std::size_t> out;
    out.reserve(outcomes.size());
    for (const auto& o : outcomes) out.push_back(o.rank());
    return out;
  }
};

/// Minimal sharp embedding of a POVM: isometry J into an aux space of
/// dimension sum_i m_i with block projections P_i satisfying J* P_i J = M_i.
struct NaimarkDilation {
  std::size_t sys_dim = 0;
  std::size_t aux_dim = 0;
  CMatrix isometry;                  // aux_dim x sys_dim
  std::vector<CMatrix> projections;  // one per outcome, on the aux space
  // outcome i occupies aux basis indices [labels[i].first, labels[i].second)
  std::vector<std::pair<std::size_t, std::size_t>> labels;
};

struct PovmClass {
  bool is_sharp = false;
  bool is_trivial = false;
  std::vector<double> trivial_probabilities;  // filled when is_trivial
  std::vector<std::size_t> rank_vector;
  bool is_rank1 = false;
};

/// Checks positivity, normalization and non-degeneracy of raw effect data.
DiscretePOVM validate_povm(const std::vector<CMatrix>& raw, const Tolerance& tol = {});

EffectDecomposition decompose_effects(const DiscretePOVM& m, const Tolerance& tol = {});

PovmClass classify(const DiscretePOVM& m, const Tolerance& tol = {});

/// Minimal Naimark dilation through the effect decomposition; verifies
/// isometry, reconstruction, minimality and the sharp <=> unitary link.
NaimarkDilation naimark_dilate(const DiscretePOVM& m, const Tolerance& tol = {});

}  // namespace qdilate
