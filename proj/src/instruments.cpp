#include "qdilate/instruments.hpp"

#include <cmath>
#include <string>

namespace qdilate {

DiscreteInstrument validate_instrument(std::size_t dim, const std::vector<KrausList>& outcomes,
                                       const Tolerance& tol) {
  tol.validate();
  require(dim >= 1, ErrorCode::InvalidInput, "system dimension must be >= 1");
  require(!outcomes.empty(), ErrorCode::InvalidInput, "instrument needs at least one outcome");
  CMatrix total(dim, dim);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].empty())
      throw Error(ErrorCode::ZeroEffect, "outcome has no Kraus operators", i);
    bool has_nonzero = false;
    for (const CMatrix& a : outcomes[i]) {
      if (!a.is_square() || a.rows() != dim)
        throw Error(ErrorCode::DimensionMismatch, "Kraus operator has wrong dimension", i);
      if (a.frobenius_norm() > tol.eps_rank) has_nonzero = true;
      total += a.adjoint() * a;
    }
    if (!has_nonzero)
      throw Error(ErrorCode::ZeroEffect, "outcome has only numerically zero Kraus operators", i);
  }
  const double deficit = (total - CMatrix::identity(dim)).frobenius_norm();
  if (deficit > tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(dim))))
    throw Error(ErrorCode::NotNormalized,
                "total map is not a channel, unitality deficit " + std::to_string(deficit));
  return DiscreteInstrument{dim, outcomes};
}

CMatrix apply_heisenberg(const DiscreteInstrument& instr, const std::vector<std::size_t>& outcome_set,
                         const CMatrix& b) {
  require(b.is_square() && b.rows() == instr.dim, ErrorCode::DimensionMismatch,
          "operator dimension does not match the instrument");
  CMatrix out(instr.dim, instr.dim);
  for (std::size_t i : outcome_set) {
    require(i < instr.outcomes.size(), ErrorCode::InvalidInput, "outcome index out of range");
    for (const CMatrix& a : instr.outcomes[i]) out += a.adjoint() * b * a;
  }
  return out;
}

DiscretePOVM associated_observable(const DiscreteInstrument& instr, const Tolerance& tol) {
  std::vector<CMatrix> effects;
  effects.reserve(instr.outcomes.size());
  for (const KrausList& ops : instr.outcomes) {
    CMatrix effect(instr.dim, instr.dim);
    for (const CMatrix& a : ops) effect += a.adjoint() * a;
    effects.push_back(std::move(effect));
  }
  return validate_povm(effects, tol);
}

KrausList induced_channel(const DiscreteInstrument& instr) {
  KrausList all;
  for (const KrausList& ops : instr.outcomes) all.insert(all.end(), ops.begin(), ops.end());
  return all;
}

KrausList minimize_kraus(const KrausList& ops, const Tolerance& tol) {
  tol.validate();
  require(!ops.empty(), ErrorCode::InvalidInput, "empty Kraus list");
  const std::size_t r = ops.size();

  CMatrix gram(r, r);
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t t = 0; t < r; ++t) gram(s, t) = (ops[s].adjoint() * ops[t]).trace();
  require(gram.max_abs() > 0.0, ErrorCode::AllZero, "all Kraus operators are zero");

  Tolerance gram_tol = tol;
  gram_tol.eps_residual = std::max(tol.eps_residual, 1e-12);
  const EigenSystem es = hermitian_eigendecompose(gram, gram_tol);
  const double top = es.eigenvalues.front();
  require(top > 0.0, ErrorCode::AllZero, "Gram matrix has no positive eigenvalue");

  // Columns of the eigenbasis mix the inputs into orthogonal operators of
  // squared norm gamma_t; the combined map is unchanged because the kept
  // eigenvectors resolve the Gram matrix.
  KrausList out;
  for (std::size_t t = 0; t < r; ++t) {
    const double gamma = es.eigenvalues[t];
    if (gamma <= tol.eps_rank * top) break;
    CMatrix b(ops.front().rows(), ops.front().cols());
    for (std::size_t s = 0; s < r; ++s) {
      const Complex w = es.eigenvectors(s, t);
      if (w == Complex(0.0, 0.0)) continue;
      b += ops[s] * w;
    }
    out.push_back(std::move(b));
  }
  return out;
}

KrausRankVector kraus_rank_vector(const DiscreteInstrument& instr, const Tolerance& tol) {
  const EffectDecomposition dec = decompose_effects(associated_observable(instr, tol), tol);
  KrausRankVector rv;
  for (std::size_t i = 0; i < instr.outcomes.size(); ++i) {
    const std::size_t r = minimize_kraus(instr.outcomes[i], tol).size();
    require(r <= dec.outcomes[i].rank() * instr.dim, ErrorCode::TheoremViolation,
            "Kraus rank exceeds the bound m_i * d");
    rv.ranks.push_back(r);
    rv.total += r;
  }
  return rv;
}

DiscreteInstrument minimize_instrument(const DiscreteInstrument& instr, const Tolerance& tol) {
  std::vector<KrausList> minimized;
  minimized.reserve(instr.outcomes.size());
  for (const KrausList& ops : instr.outcomes) minimized.push_back(minimize_kraus(ops, tol));
  return DiscreteInstrument{instr.dim, std::move(minimized)};
}

StructureVectors structure_vectors(const DiscreteInstrument& instr, const EffectDecomposition& dec,
                                   const Tolerance& tol) {
  tol.validate();
  require(dec.dim == instr.dim && dec.outcomes.size() == instr.outcomes.size(),
          ErrorCode::DimensionMismatch, "decomposition does not match the instrument");
  StructureVectors sv;
  sv.vectors.resize(instr.outcomes.size());
  for (std::size_t i = 0; i < instr.outcomes.size(); ++i) {
    const auto& ops = instr.outcomes[i];
    const auto& out = dec.outcomes[i];
    sv.vectors[i].assign(out.rank(), std::vector<CVector>(ops.size()));
    for (std::size_t k = 0; k < out.rank(); ++k)
      for (std::size_t s = 0; s < ops.size(); ++s) sv.vectors[i][k][s] = ops[s].apply(out.g[k]);

    // sum_s <phi_iks|phi_ils> = delta_kl
    for (std::size_t k = 0; k < out.rank(); ++k) {
      for (std::size_t l = 0; l < out.rank(); ++l) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < ops.size(); ++s) acc += vdot(sv.vectors[i][k][s], sv.vectors[i][l][s]);
        const double dev = std::abs(acc - (k == l ? 1.0 : 0.0));
        if (dev > tol.eps_residual * (1.0 + static_cast<double>(instr.dim)))
          throw Error(ErrorCode::ReconstructionFailed,
                      "structure vectors violate the orthogonality relation", i);
      }
    }
    // A_is = sum_k |phi_iks><d_ik|
    for (std::size_t s = 0; s < ops.size(); ++s) {
      CMatrix rebuilt(instr.dim, instr.dim);
      for (std::size_t k = 0; k < out.rank(); ++k) rebuilt += CMatrix::outer(sv.vectors[i][k][s], out.d[k]);
      if ((rebuilt - ops[s]).frobenius_norm() > tol.eps_residual * (1.0 + ops[s].frobenius_norm()))
        throw Error(ErrorCode::ReconstructionFailed,
                    "structure vectors do not rebuild the Kraus operator", i);
    }
  }
  return sv;
}

DiscreteInstrument luders_instrument(const DiscretePOVM& m, const Tolerance& tol) {
  std::vector<KrausList> outcomes;
  outcomes.reserve(m.effects.size());
  for (const CMatrix& effect : m.effects) outcomes.push_back({hermitian_sqrt_psd(effect, tol)});
  return validate_instrument(m.dim, outcomes, tol);
}

DiscreteInstrument rank1_instrument_with_vectors(const DiscretePOVM& m,
                                                 const std::vector<std::vector<CVector>>& phi,
                                                 const Tolerance& tol) {
  tol.validate();
  const EffectDecomposition dec = decompose_effects(m, tol);
  require(phi.size() == m.effects.size(), ErrorCode::InvalidInput,
          "one vector list per outcome required");
  std::vector<KrausList> outcomes;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto& out = dec.outcomes[i];
    if (phi[i].size() != out.rank())
      throw Error(ErrorCode::CountMismatch, "vector count must equal the effect rank", i);
    for (std::size_t k = 0; k < phi[i].size(); ++k) {
      if (phi[i][k].size() != m.dim)
        throw Error(ErrorCode::DimensionMismatch, "vector length mismatch", i);
      for (std::size_t l = 0; l < phi[i].size(); ++l) {
        const double dev = std::abs(vdot(phi[i][k], phi[i][l]) - (k == l ? 1.0 : 0.0));
        if (dev > tol.eps_residual * (1.0 + static_cast<double>(m.dim)))
          throw Error(ErrorCode::NotOrthonormal, "structure vectors must be orthonormal", i);
      }
    }
    CMatrix a(m.dim, m.dim);
    for (std::size_t k = 0; k < phi[i].size(); ++k) a += CMatrix::outer(phi[i][k], out.d[k]);
    outcomes.push_back({std::move(a)});
  }
  const DiscreteInstrument instr = validate_instrument(m.dim, outcomes, tol);
  const DiscretePOVM rebuilt = associated_observable(instr, tol);
  for (std::size_t i = 0; i < m.effects.size(); ++i)
    require((rebuilt.effects[i] - m.effects[i]).frobenius_norm() <=
                tol.eps_residual * (1.0 + m.effects[i].frobenius_norm()),
            ErrorCode::TheoremViolation, "constructed instrument does not measure the observable");
  return instr;
}

NoInfoReport check_no_info_without_disturbance(const DiscreteInstrument& instr, const Tolerance& tol) {
  NoInfoReport report;
  const KrausList minimal = minimize_kraus(induced_channel(instr), tol);
  if (minimal.size() != 1) return report;

  report.applicable = true;
  const DiscretePOVM m = associated_observable(instr, tol);
  for (const CMatrix& effect : m.effects) {
    const double p = effect.trace().real() / static_cast<double>(m.dim);
    report.probabilities.push_back(p);
    const double res = (effect - CMatrix::identity(m.dim) * Complex(p, 0.0)).frobenius_norm();
    report.max_residual = std::max(report.max_residual, res);
  }
  require(report.max_residual <= tol.eps_residual * (1.0 + static_cast<double>(m.dim)),
          ErrorCode::TheoremViolation,
          "isometric channel paired with a non-trivial observable");
  return report;
}

}  // namespace qdilate
