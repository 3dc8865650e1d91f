#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qdilate/instruments.hpp"
#include "qdilate/linalg.hpp"

namespace qdilate {

/// Minimal Stinespring dilation of an instrument: an isometry
/// Y: C^d -> C^d (x) C^pointer_dim with a sharp pointer PVM, satisfying
/// I_i*(B) = Y* (B (x) P_i) Y.
struct StinespringDilation {
  std::size_t sys_dim = 0;
  std::size_t pointer_dim = 0;
  // pointer basis index q corresponds to (outcome, kraus index) pair
  std::vector<std::pair<std::size_t, std::size_t>> pointer_labels;
  CMatrix isometry;  // (sys_dim * pointer_dim) x sys_dim
  std::vector<CMatrix> pointer_pvm;

  std::size_t outcome_count() const noexcept { return pointer_pvm.size(); }
  /// Kraus operators encoded in the dilation: A_q[m][n] = Y[(m,q), n].
  KrausList kraus_of_outcome(std::size_t outcome) const;
};

struct StinespringReport {
  double max_residual = 0.0;
  bool pass = false;
};

/// Builds the dilation from the minimized Kraus lists, column by column:
/// Y h_n = sum_{i,s} (A_is h_n) (x) e_is.
StinespringDilation build_minimal_stinespring(const DiscreteInstrument& instr,
                                              const Tolerance& tol = {});

/// Max residual of I_i*(B) = Y*(B (x) P_i)Y over all outcomes and matrix
/// units B; passes iff <= eps_residual * (1 + d).
StinespringReport verify_stinespring(const StinespringDilation& dil,
                                     const DiscreteInstrument& instr, const Tolerance& tol = {});

/// Minimality of the dilation, decided two independent ways: brute-force
/// rank of the span {(E_nm (x) P_i) Y h_l} against d * pointer_dim, and
/// linear independence of the per-outcome Kraus operators read off the
/// dilation. The two verdicts must agree.
bool check_minimality(const StinespringDilation& dil, const DiscreteInstrument& instr,
                      const Tolerance& tol = {});

}  // namespace qdilate
