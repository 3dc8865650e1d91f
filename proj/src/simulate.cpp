#include "qdilate/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "qdilate/rng.hpp"

namespace qdilate {

QuantumState validate_state(const CMatrix& rho, const Tolerance& tol) {
  tol.validate();
  require(rho.is_square(), ErrorCode::NotSquare, "density matrix must be square");
  require(hermitian_residual(rho) <= tol.eps_residual * (1.0 + rho.frobenius_norm()),
          ErrorCode::NotHermitian, "density matrix must be Hermitian");
  const EigenSystem es = hermitian_eigendecompose(rho, tol);
  require(es.eigenvalues.back() >= -tol.eps_residual, ErrorCode::NotPositive,
          "density matrix must be positive semidefinite");
  require(std::abs(rho.trace().real() - 1.0) <= tol.eps_residual, ErrorCode::NotNormalized,
          "density matrix must have unit trace");
  return QuantumState{rho.rows(), rho};
}

std::vector<double> born_probabilities(const DiscretePOVM& m, const QuantumState& rho,
                                       const Tolerance& tol) {
  tol.validate();
  require(m.dim == rho.dim, ErrorCode::DimensionMismatch,
          "observable and state dimensions differ");
  std::vector<double> probs;
  probs.reserve(m.effects.size());
  double total = 0.0;
  for (const CMatrix& effect : m.effects) {
    double p = (effect * rho.matrix).trace().real();
    p = std::clamp(p, 0.0, 1.0);
    total += p;
    probs.push_back(p);
  }
  require(std::abs(total - 1.0) <= tol.eps_residual * (1.0 + static_cast<double>(m.dim)),
          ErrorCode::NotNormalized, "Born probabilities do not sum to one");
  return probs;
}

QuantumState post_state(const DiscreteInstrument& instr, const QuantumState& rho,
                        std::size_t outcome, const Tolerance& tol) {
  tol.validate();
  require(instr.dim == rho.dim, ErrorCode::DimensionMismatch,
          "instrument and state dimensions differ");
  require(outcome < instr.outcomes.size(), ErrorCode::InvalidInput, "outcome index out of range");
  CMatrix mapped(instr.dim, instr.dim);
  for (const CMatrix& a : instr.outcomes[outcome]) mapped += a * rho.matrix * a.adjoint();
  const double p = mapped.trace().real();
  if (p <= tol.eps_rank)
    throw Error(ErrorCode::ZeroProbabilityOutcome,
                "conditional state of a zero-probability outcome", outcome);
  return QuantumState{instr.dim, mapped * Complex(1.0 / p, 0.0)};
}

CompositeResult run_composite(const NormalMeasurementModel& model, const QuantumState& rho,
                              const Tolerance& tol) {
  tol.validate();
  const std::size_t d = model.sys_dim;
  const std::size_t k = model.app_dim;
  require(rho.dim == d, ErrorCode::DimensionMismatch, "state dimension mismatch");

  const CMatrix w = model.unitary * probe_embedding(d, model.probe);
  const CMatrix evolved = w * rho.matrix * w.adjoint();  // U (rho (x) |xi><xi|) U*

  CompositeResult out;
  for (const CMatrix& proj : model.pointer_pvm) {
    // tr_K[(I (x) P) sigma (I (x) P)] entrywise: tr(P sigma_mm' P) = tr(sigma_mm' P)
    CMatrix reduced(d, d);
    for (std::size_t m = 0; m < d; ++m)
      for (std::size_t mp = 0; mp < d; ++mp) {
        Complex acc = 0.0;
        for (std::size_t q = 0; q < k; ++q)
          for (std::size_t r = 0; r < k; ++r) acc += evolved(m * k + r, mp * k + q) * proj(q, r);
        reduced(m, mp) = acc;
      }
    const double p = std::clamp(reduced.trace().real(), 0.0, 1.0);
    out.probabilities.push_back(p);
    if (p > tol.eps_rank) {
      out.post_states.push_back(QuantumState{d, reduced * Complex(1.0 / p, 0.0)});
    } else {
      out.post_states.push_back(std::nullopt);
    }
  }
  return out;
}

ShotRecord sample(const NormalMeasurementModel& model, const QuantumState& rho, std::size_t shots,
                  std::uint64_t seed, const Tolerance& tol) {
  require(shots >= 1, ErrorCode::InvalidInput, "need at least one shot");
  const CompositeResult composite = run_composite(model, rho, tol);

  std::vector<double> cumulative;
  cumulative.reserve(composite.probabilities.size());
  double total = 0.0;
  for (double p : composite.probabilities) {
    total += p;
    cumulative.push_back(total);
  }

  ShotRecord record;
  record.shots = shots;
  record.seed = seed;
  record.counts.assign(composite.probabilities.size(), 0);

  SplitMix64 rng(seed);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    const double u = rng.next_uniform() * total;
    std::size_t outcome = cumulative.size() - 1;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
      if (u < cumulative[i]) {
        outcome = i;
        break;
      }
    }
    ++record.counts[outcome];
  }
  record.frequencies.reserve(record.counts.size());
  for (std::size_t c : record.counts)
    record.frequencies.push_back(static_cast<double>(c) / static_cast<double>(shots));
  return record;
}

}  // namespace qdilate
