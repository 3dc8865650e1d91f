#include "qdilate/dilation.hpp"

#include <cmath>

namespace qdilate {

KrausList StinespringDilation::kraus_of_outcome(std::size_t outcome) const {
  KrausList ops;
  for (std::size_t q = 0; q < pointer_dim; ++q) {
    if (pointer_labels[q].first != outcome) continue;
    CMatrix a(sys_dim, sys_dim);
    for (std::size_t m = 0; m < sys_dim; ++m)
      for (std::size_t n = 0; n < sys_dim; ++n) a(m, n) = isometry(m * pointer_dim + q, n);
    ops.push_back(std::move(a));
  }
  return ops;
}

StinespringDilation build_minimal_stinespring(const DiscreteInstrument& instr,
                                              const Tolerance& tol) {
  const DiscreteInstrument minimal = minimize_instrument(instr, tol);
  const std::size_t d = minimal.dim;

  StinespringDilation dil;
  dil.sys_dim = d;
  dil.pointer_dim = 0;
  for (const KrausList& ops : minimal.outcomes) dil.pointer_dim += ops.size();

  dil.isometry = CMatrix(d * dil.pointer_dim, d);
  std::size_t q = 0;
  for (std::size_t i = 0; i < minimal.outcomes.size(); ++i) {
    CMatrix proj(dil.pointer_dim, dil.pointer_dim);
    for (std::size_t s = 0; s < minimal.outcomes[i].size(); ++s, ++q) {
      dil.pointer_labels.emplace_back(i, s);
      proj(q, q) = 1.0;
      const CMatrix& a = minimal.outcomes[i][s];
      for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) dil.isometry(m * dil.pointer_dim + q, n) = a(m, n);
    }
    dil.pointer_pvm.push_back(std::move(proj));
  }

  const CMatrix yty = dil.isometry.adjoint() * dil.isometry;
  require((yty - CMatrix::identity(d)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(d))),
          ErrorCode::TheoremViolation, "Stinespring map is not an isometry");
  return dil;
}

StinespringReport verify_stinespring(const StinespringDilation& dil,
                                     const DiscreteInstrument& instr, const Tolerance& tol) {
  tol.validate();
  const std::size_t d = instr.dim;
  const std::size_t k = dil.pointer_dim;
  require(dil.sys_dim == d && dil.isometry.rows() == d * k && dil.isometry.cols() == d,
          ErrorCode::DimensionMismatch, "dilation does not fit the instrument");
  require(dil.pointer_pvm.size() == instr.outcomes.size(), ErrorCode::DimensionMismatch,
          "pointer PVM outcome count mismatch");

  // Row block m of Y holds the apparatus components of Y h_n at system
  // index m, so Y*(E_nm (x) P_i)Y = (block n)* P_i (block m).
  std::vector<CMatrix> blocks;  // k x d each
  blocks.reserve(d);
  for (std::size_t m = 0; m < d; ++m) {
    CMatrix b(k, d);
    for (std::size_t q = 0; q < k; ++q)
      for (std::size_t c = 0; c < d; ++c) b(q, c) = dil.isometry(m * k + q, c);
    blocks.push_back(std::move(b));
  }

  StinespringReport report;
  for (std::size_t i = 0; i < instr.outcomes.size(); ++i) {
    std::vector<CMatrix> projected;  // P_i * block m
    projected.reserve(d);
    for (std::size_t m = 0; m < d; ++m) projected.push_back(dil.pointer_pvm[i] * blocks[m]);
    for (std::size_t n = 0; n < d; ++n) {
      for (std::size_t m = 0; m < d; ++m) {
        const CMatrix lhs = apply_heisenberg(instr, {i}, CMatrix::unit(d, n, m));
        const CMatrix rhs = blocks[n].adjoint() * projected[m];
        report.max_residual = std::max(report.max_residual, (lhs - rhs).frobenius_norm());
      }
    }
  }
  report.pass = report.max_residual <= tol.eps_residual * (1.0 + static_cast<double>(d));
  return report;
}

bool check_minimality(const StinespringDilation& dil, const DiscreteInstrument& instr,
                      const Tolerance& tol) {
  tol.validate();
  const std::size_t d = dil.sys_dim;
  const std::size_t k = dil.pointer_dim;
  const std::size_t n_outcomes = dil.pointer_pvm.size();
  require(instr.dim == d, ErrorCode::DimensionMismatch, "instrument dimension mismatch");

  // Brute force: the span of (E_nm (x) P_i) Y h_l. The first tensor factor
  // contributes a full canonical direction e_n, so columns are laid out as
  // e_n (x) (P_i (Y h_l) block m).
  CMatrix span(d * k, d * d * n_outcomes * d);
  std::size_t col = 0;
  for (std::size_t n = 0; n < d; ++n) {
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t i = 0; i < n_outcomes; ++i) {
        for (std::size_t l = 0; l < d; ++l, ++col) {
          CVector w(k, Complex(0.0, 0.0));
          for (std::size_t q = 0; q < k; ++q) w[q] = dil.isometry(m * k + q, l);
          const CVector pw = dil.pointer_pvm[i].apply(w);
          for (std::size_t q = 0; q < k; ++q) span(n * k + q, col) = pw[q];
        }
      }
    }
  }
  const bool brute = numerical_rank(span, tol) == d * k;

  // Fast criterion: the Kraus operators encoded per outcome in the dilation
  // are linearly independent.
  bool fast = true;
  for (std::size_t i = 0; i < n_outcomes && fast; ++i) {
    const KrausList ops = dil.kraus_of_outcome(i);
    if (ops.empty()) {
      fast = false;
      break;
    }
    CMatrix stacked(d * d, ops.size());
    for (std::size_t s = 0; s < ops.size(); ++s)
      for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) stacked(m * d + n, s) = ops[s](m, n);
    fast = numerical_rank(stacked, tol) == ops.size();
  }

  require(brute == fast, ErrorCode::TheoremViolation,
          "minimality criteria disagree (span rank vs Kraus independence)");
  return brute;
}

}  // namespace qdilate
