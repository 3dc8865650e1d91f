#include "qdilate/observables.hpp"

#include <cmath>
#include <string>

namespace qdilate {

DiscretePOVM validate_povm(const std::vector<CMatrix>& raw, const Tolerance& tol) {
  tol.validate();
  require(!raw.empty(), ErrorCode::InvalidInput, "observable needs at least one effect");
  const std::size_t dim = raw.front().rows();
  CMatrix sum(dim, dim);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const CMatrix& effect = raw[i];
    if (!effect.is_square() || effect.rows() != dim)
      throw Error(ErrorCode::DimensionMismatch, "effect has inconsistent dimension", i);
    if (effect.frobenius_norm() <= tol.eps_rank)
      throw Error(ErrorCode::ZeroEffect, "effect is numerically zero", i);
    try {
      const EigenSystem es = hermitian_eigendecompose(effect, tol);
      if (es.eigenvalues.back() < -tol.eps_residual)
        throw Error(ErrorCode::NotPositive, "effect has a negative eigenvalue", i);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotHermitian)
        throw Error(ErrorCode::NotPositive, "effect is not Hermitian", i);
      throw;
    }
    sum += effect;
  }
  const double deficit = (sum - CMatrix::identity(dim)).frobenius_norm();
  if (deficit > tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(dim))))
    throw Error(ErrorCode::NotNormalized,
                "effects sum away from the identity by " + std::to_string(deficit));
  return DiscretePOVM{dim, raw};
}

EffectDecomposition decompose_effects(const DiscretePOVM& m, const Tolerance& tol) {
  tol.validate();
  EffectDecomposition dec;
  dec.dim = m.dim;
  dec.outcomes.reserve(m.effects.size());
  for (const CMatrix& effect : m.effects) {
    const EigenSystem es = hermitian_eigendecompose(effect, tol);
    const double top = es.eigenvalues.front();
    EffectDecomposition::Outcome out;
    for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
      const double lambda = es.eigenvalues[k];
      if (lambda <= tol.eps_rank * top) break;  // descending order
      const CVector psi = es.eigenvectors.column(k);
      const double root = std::sqrt(lambda);
      out.eigenvalues.push_back(lambda);
      out.eigenvectors.push_back(psi);
      out.d.push_back(Complex(root, 0.0) * psi);
      out.g.push_back(Complex(1.0 / root, 0.0) * psi);
    }
    require(!out.eigenvalues.empty(), ErrorCode::ZeroEffect,
            "effect decomposition produced no components");
    dec.outcomes.push_back(std::move(out));
  }
  return dec;
}

PovmClass classify(const DiscretePOVM& m, const Tolerance& tol) {
  tol.validate();
  PovmClass cls;
  cls.rank_vector = decompose_effects(m, tol).rank_vector();
  cls.is_rank1 = true;
  for (std::size_t r : cls.rank_vector)
    if (r != 1) cls.is_rank1 = false;

  cls.is_sharp = true;
  for (const CMatrix& effect : m.effects) {
    if ((effect * effect - effect).frobenius_norm() > tol.eps_residual * (1.0 + effect.frobenius_norm())) {
      cls.is_sharp = false;
      break;
    }
  }

  cls.is_trivial = true;
  std::vector<double> probs;
  for (const CMatrix& effect : m.effects) {
    const double p = effect.trace().real() / static_cast<double>(m.dim);
    const CMatrix diff = effect - CMatrix::identity(m.dim) * Complex(p, 0.0);
    if (diff.frobenius_norm() > tol.eps_residual * (1.0 + effect.frobenius_norm())) {
      cls.is_trivial = false;
      break;
    }
    probs.push_back(p);
  }
  if (cls.is_trivial) cls.trivial_probabilities = std::move(probs);
  return cls;
}

NaimarkDilation naimark_dilate(const DiscretePOVM& m, const Tolerance& tol) {
  const EffectDecomposition dec = decompose_effects(m, tol);
  const std::size_t n_outcomes = m.effects.size();

  NaimarkDilation dil;
  dil.sys_dim = m.dim;
  dil.aux_dim = 0;
  for (const auto& o : dec.outcomes) dil.aux_dim += o.rank();

  // Row (i,k) of J is <d_ik|, so J psi = sum_{ik} <d_ik|psi> e_ik.
  dil.isometry = CMatrix(dil.aux_dim, dil.sys_dim);
  std::size_t base = 0;
  for (std::size_t i = 0; i < n_outcomes; ++i) {
    const auto& o = dec.outcomes[i];
    for (std::size_t k = 0; k < o.rank(); ++k)
      for (std::size_t c = 0; c < m.dim; ++c)
        dil.isometry(base + k, c) = std::conj(o.d[k][c]);
    CMatrix proj(dil.aux_dim, dil.aux_dim);
    for (std::size_t k = 0; k < o.rank(); ++k) proj(base + k, base + k) = 1.0;
    dil.projections.push_back(std::move(proj));
    dil.labels.emplace_back(base, base + o.rank());
    base += o.rank();
  }

  const CMatrix jtj = dil.isometry.adjoint() * dil.isometry;
  require((jtj - CMatrix::identity(m.dim)).frobenius_norm() <= tol.eps_residual * (1.0 + std::sqrt(double(m.dim))),
          ErrorCode::TheoremViolation, "Naimark isometry violates J*J = I");
  for (std::size_t i = 0; i < n_outcomes; ++i) {
    const CMatrix rebuilt = dil.isometry.adjoint() * dil.projections[i] * dil.isometry;
    require((rebuilt - m.effects[i]).frobenius_norm() <= tol.eps_residual * (1.0 + m.effects[i].frobenius_norm()),
            ErrorCode::TheoremViolation, "Naimark dilation does not reproduce the effects");
  }

  // Minimality: the vectors P_i J h_l must span the whole aux space.
  CMatrix span(dil.aux_dim, n_outcomes * m.dim);
  for (std::size_t i = 0; i < n_outcomes; ++i) {
    const auto [lo, hi] = dil.labels[i];
    for (std::size_t l = 0; l < m.dim; ++l)
      for (std::size_t r = lo; r < hi; ++r) span(r, i * m.dim + l) = dil.isometry(r, l);
  }
  require(numerical_rank(span, tol) == dil.aux_dim, ErrorCode::TheoremViolation,
          "Naimark dilation is not minimal");

  // For a minimal dilation, sharp observables are exactly those with unitary J.
  const bool square = dil.aux_dim == dil.sys_dim;
  const bool unitary =
      square && (dil.isometry * dil.isometry.adjoint() - CMatrix::identity(dil.aux_dim))
                        .frobenius_norm() <= tol.eps_residual * (1.0 + std::sqrt(double(dil.aux_dim)));
  require(unitary == classify(m, tol).is_sharp, ErrorCode::TheoremViolation,
          "sharpness and unitarity of the minimal dilation disagree");
  return dil;
}

}  // namespace qdilate
