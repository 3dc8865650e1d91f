#include "qdilate/models.hpp"

#include <cmath>
#include <string>

#include "qdilate/rng.hpp"

namespace qdilate {

namespace {

// Probe states used by the probability residual of verify_model. Fixed seed
// so that reports are reproducible.
constexpr std::uint64_t kVerifyStateSeed = 0x51a7e5u;
constexpr std::size_t kVerifyStateCount = 5;

std::vector<CMatrix> verification_states(std::size_t dim) {
  std::vector<CMatrix> states;
  states.push_back(CMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim), 0.0));
  CMatrix pure(dim, dim);
  pure(0, 0) = 1.0;
  states.push_back(pure);
  SplitMix64 rng(kVerifyStateSeed);
  for (std::size_t i = 0; i < kVerifyStateCount; ++i)
    states.push_back(random_density_matrix(rng, dim));
  return states;
}

std::vector<std::string> default_labels(std::size_t n_outcomes) {
  std::vector<std::string> labels;
  labels.reserve(n_outcomes);
  for (std::size_t i = 1; i <= n_outcomes; ++i) labels.push_back("x" + std::to_string(i));
  return labels;
}

// Row block m of a (d*k) x c matrix, as a k x c matrix.
CMatrix row_block(const CMatrix& m, std::size_t block, std::size_t k) {
  CMatrix out(k, m.cols());
  for (std::size_t q = 0; q < k; ++q)
    for (std::size_t c = 0; c < m.cols(); ++c) out(q, c) = m(block * k + q, c);
  return out;
}

}  // namespace

CMatrix probe_embedding(std::size_t sys_dim, const CVector& xi) {
  const std::size_t k = xi.size();
  CMatrix y(sys_dim * k, sys_dim);
  for (std::size_t n = 0; n < sys_dim; ++n)
    for (std::size_t q = 0; q < k; ++q) y(n * k + q, n) = xi[q];
  return y;
}

CMatrix extend_to_unitary(const CMatrix& isometry, const CVector& xi, const Tolerance& tol) {
  tol.validate();
  const std::size_t d = isometry.cols();
  const std::size_t k = xi.size();
  require(isometry.rows() == d * k, ErrorCode::DimensionMismatch,
          "isometry must map C^d into C^d (x) C^k");
  require(std::abs(vec_norm(xi) - 1.0) <= tol.eps_residual, ErrorCode::NotUnitVector,
          "probe vector must have unit norm");
  const std::size_t full = d * k;
  const CMatrix yty = isometry.adjoint() * isometry;
  require((yty - CMatrix::identity(d)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(d))),
          ErrorCode::NotIsometry, "Y*Y = I violated");

  std::vector<CVector> domain;
  domain.reserve(d);
  for (std::size_t n = 0; n < d; ++n)
    domain.push_back(vec_kron(canonical_basis_vector(d, n), xi));
  std::vector<CVector> range;
  range.reserve(d);
  for (std::size_t n = 0; n < d; ++n) range.push_back(isometry.column(n));

  const std::vector<CVector> domain_basis = orthonormal_complete(domain, full, tol);
  const std::vector<CVector> range_basis = orthonormal_complete(range, full, tol);

  CMatrix u(full, full);
  for (std::size_t j = 0; j < full; ++j) {
    const CVector& src = domain_basis[j];
    const CVector& dst = range_basis[j];
    for (std::size_t r = 0; r < full; ++r) {
      if (dst[r] == Complex(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < full; ++c) u(r, c) += dst[r] * std::conj(src[c]);
    }
  }

  require((u.adjoint() * u - CMatrix::identity(full)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(full))),
          ErrorCode::TheoremViolation, "extension is not unitary");
  return u;
}

CMatrix halmos_dilation(const CMatrix& a, const Tolerance& tol) {
  tol.validate();
  require(a.is_square(), ErrorCode::NotSquare, "Halmos dilation needs a square matrix");
  const std::size_t n = a.rows();
  require(operator_two_norm(a, tol) <= 1.0 + tol.eps_residual, ErrorCode::NotContraction,
          "operator norm exceeds 1");

  const CMatrix upper = hermitian_sqrt_psd(CMatrix::identity(n) - a * a.adjoint(), tol);
  const CMatrix lower = hermitian_sqrt_psd(CMatrix::identity(n) - a.adjoint() * a, tol);
  const CMatrix astar = a.adjoint();

  CMatrix u(2 * n, 2 * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      u(r, c) = a(r, c);
      u(r, n + c) = upper(r, c);
      u(n + r, c) = lower(r, c);
      u(n + r, n + c) = -astar(r, c);
    }
  require((u.adjoint() * u - CMatrix::identity(2 * n)).frobenius_norm() <=
              tol.eps_residual * (1.0 + std::sqrt(static_cast<double>(2 * n))),
          ErrorCode::TheoremViolation, "Halmos block matrix is not unitary");
  return u;
}

namespace {

NormalMeasurementModel model_from_dilation(const CMatrix& isometry,
                                           const std::vector<CMatrix>& pointer_pvm,
                                           const std::vector<std::string>& labels, bool has_sink,
                                           const std::optional<CVector>& xi_opt,
                                           const Tolerance& tol) {
  const std::size_t d = isometry.cols();
  const std::size_t k = isometry.rows() / d;
  CVector xi;
  if (xi_opt.has_value()) {
    require(xi_opt->size() == k, ErrorCode::DimensionMismatch,
            "probe vector length must equal the apparatus dimension");
    xi = *xi_opt;
  } else {
    xi = canonical_basis_vector(k, 0);
  }
  NormalMeasurementModel model;
  model.sys_dim = d;
  model.app_dim = k;
  model.pointer_pvm = pointer_pvm;
  model.unitary = extend_to_unitary(isometry, xi, tol);
  model.probe = std::move(xi);
  model.outcome_labels = labels;
  model.has_sink = has_sink;
  return model;
}

}  // namespace

AugmentedModel augment_dilation(const StinespringDilation& dil, const std::optional<CVector>& xi,
                                const Tolerance& tol) {
  const std::size_t d = dil.sys_dim;
  const std::size_t k = dil.pointer_dim;
  const std::size_t ka = k + 1;

  CMatrix y_plus(d * ka, d);
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t q = 0; q < k; ++q)
      for (std::size_t n = 0; n < d; ++n) y_plus(m * ka + q, n) = dil.isometry(m * k + q, n);

  std::vector<CMatrix> pvm;
  pvm.reserve(dil.pointer_pvm.size() + 1);
  for (const CMatrix& p : dil.pointer_pvm) {
    CMatrix grown(ka, ka);
    for (std::size_t q = 0; q < k; ++q)
      for (std::size_t r = 0; r < k; ++r) grown(q, r) = p(q, r);
    pvm.push_back(std::move(grown));
  }
  CMatrix sink(ka, ka);
  sink(k, k) = 1.0;
  pvm.push_back(std::move(sink));

  std::vector<std::string> labels = default_labels(dil.pointer_pvm.size());
  labels.push_back("omega0");

  AugmentedModel out;
  out.model = model_from_dilation(y_plus, pvm, labels, true, xi, tol);
  out.sink_index = dil.pointer_pvm.size();
  return out;
}

AugmentedModel augment_plus_one(const StinespringDilation& dil, const DiscreteInstrument& instr,
                                const Tolerance& tol) {
  AugmentedModel out = augment_dilation(dil, std::nullopt, tol);
  const ModelReport report = verify_model(out.model, instr, tol);
  require(report.pass, ErrorCode::TheoremViolation,
          "augmented model fails to realize the extended instrument");
  return out;
}

NormalMeasurementModel assemble_model(const DiscreteInstrument& instr,
                                      const std::optional<CVector>& xi, const Tolerance& tol) {
  const StinespringDilation dil = build_minimal_stinespring(instr, tol);
  NormalMeasurementModel model = model_from_dilation(
      dil.isometry, dil.pointer_pvm, default_labels(instr.outcomes.size()), false, xi, tol);
  const ModelReport report = verify_model(model, instr, tol);
  require(report.pass, ErrorCode::TheoremViolation, "assembled model fails verification");
  return model;
}

ModelReport verify_model(const NormalMeasurementModel& model, const DiscreteInstrument& instr,
                         const Tolerance& tol) {
  tol.validate();
  const std::size_t d = instr.dim;
  const std::size_t k = model.app_dim;
  const std::size_t n_outcomes = instr.outcomes.size();
  require(model.sys_dim == d, ErrorCode::DimensionMismatch, "system dimension mismatch");
  require(model.unitary.rows() == d * k && model.unitary.is_square(),
          ErrorCode::DimensionMismatch, "unitary dimension mismatch");
  require(model.pointer_count() == n_outcomes + (model.has_sink ? 1 : 0),
          ErrorCode::DimensionMismatch, "pointer outcome count mismatch");
  require(model.probe.size() == k, ErrorCode::DimensionMismatch, "probe dimension mismatch");

  // W = U Y_xi carries everything: W* (B (x) P_i) W = Y_xi* U* (B (x) P_i) U Y_xi.
  const CMatrix w = model.unitary * probe_embedding(d, model.probe);
  std::vector<CMatrix> blocks;
  blocks.reserve(d);
  for (std::size_t m = 0; m < d; ++m) blocks.push_back(row_block(w, m, k));

  ModelReport report;
  const DiscretePOVM observable = associated_observable(instr, tol);
  for (std::size_t i = 0; i < model.pointer_count(); ++i) {
    const bool is_sink = model.has_sink && i == n_outcomes;
    std::vector<CMatrix> projected;
    projected.reserve(d);
    for (std::size_t m = 0; m < d; ++m) projected.push_back(model.pointer_pvm[i] * blocks[m]);

    // (a) Heisenberg maps on matrix units; the sink must act as the zero map.
    for (std::size_t n = 0; n < d; ++n) {
      for (std::size_t m = 0; m < d; ++m) {
        const CMatrix rhs = blocks[n].adjoint() * projected[m];
        if (is_sink) {
          report.sink_residual = std::max(report.sink_residual, rhs.frobenius_norm());
        } else {
          const CMatrix lhs = apply_heisenberg(instr, {i}, CMatrix::unit(d, n, m));
          report.instrument_residual =
              std::max(report.instrument_residual, (lhs - rhs).frobenius_norm());
        }
      }
    }

    // (b) measured observable
    CMatrix effect(d, d);
    for (std::size_t m = 0; m < d; ++m) effect += blocks[m].adjoint() * projected[m];
    if (is_sink) {
      report.sink_residual = std::max(report.sink_residual, effect.frobenius_norm());
    } else {
      report.observable_residual =
          std::max(report.observable_residual, (effect - observable.effects[i]).frobenius_norm());
    }
  }

  // (c) probability reproducibility over the fixed probe-state set
  for (const CMatrix& rho : verification_states(d)) {
    const CMatrix evolved = w * rho * w.adjoint();
    for (std::size_t i = 0; i < model.pointer_count(); ++i) {
      const bool is_sink = model.has_sink && i == n_outcomes;
      double p_model = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        const CMatrix block = row_block(evolved, m, k);  // rows of system index m
        Complex acc = 0.0;
        for (std::size_t q = 0; q < k; ++q) {
          for (std::size_t r = 0; r < k; ++r) acc += model.pointer_pvm[i](q, r) * block(r, m * k + q);
        }
        p_model += acc.real();
      }
      if (is_sink) {
        report.sink_residual = std::max(report.sink_residual, std::abs(p_model));
      } else {
        const double p_born = (observable.effects[i] * rho).trace().real();
        report.probability_residual =
            std::max(report.probability_residual, std::abs(p_model - p_born));
      }
    }
  }

  const double bound = tol.eps_residual * (1.0 + static_cast<double>(d));
  report.pass = report.instrument_residual <= bound && report.observable_residual <= bound &&
                report.probability_residual <= bound && report.sink_residual <= bound;
  return report;
}

EnvironmentReport environment_channel_check(const NormalMeasurementModel& model,
                                            const DiscreteInstrument& instr,
                                            const Tolerance& tol) {
  tol.validate();
  const std::size_t d = instr.dim;
  const std::size_t k = model.app_dim;
  require(model.sys_dim == d, ErrorCode::DimensionMismatch, "system dimension mismatch");

  const CMatrix w = model.unitary * probe_embedding(d, model.probe);
  const KrausList channel = induced_channel(instr);

  EnvironmentReport report;
  // U (E_nm (x) |xi><xi|) U* = (W e_n)(W e_m)*, so the model's channel on a
  // matrix unit is the traced-out outer product of two W columns.
  for (std::size_t n = 0; n < d; ++n) {
    const CVector wn = w.column(n);
    for (std::size_t m = 0; m < d; ++m) {
      const CVector wm = w.column(m);
      CMatrix traced(d, d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          Complex acc = 0.0;
          for (std::size_t q = 0; q < k; ++q) acc += wn[a * k + q] * std::conj(wm[b * k + q]);
          traced(a, b) = acc;
        }
      CMatrix expected(d, d);
      for (const CMatrix& op : channel) {
        const CVector cn = op.column(n);
        const CVector cm = op.column(m);
        expected += CMatrix::outer(cn, cm);
      }
      report.channel_residual =
          std::max(report.channel_residual, (traced - expected).frobenius_norm());
    }
  }

  report.channel_rank = minimize_kraus(channel, tol).size();
  bool rank_ok = true;
  if (instr.outcomes.size() == 1 && !model.has_sink) {
    report.env_dim_matches = (model.app_dim == report.channel_rank);
    rank_ok = *report.env_dim_matches;
  }
  report.pass =
      report.channel_residual <= tol.eps_residual * (1.0 + static_cast<double>(d)) && rank_ok;
  return report;
}

NormalMeasurementModel minimal_observable_model(const DiscretePOVM& m, const Tolerance& tol) {
  const DiscreteInstrument instr = luders_instrument(m, tol);
  NormalMeasurementModel model = assemble_model(instr, std::nullopt, tol);
  require(model.app_dim == m.effects.size(), ErrorCode::TheoremViolation,
          "observable model does not reach apparatus dimension N");
  for (const CMatrix& p : model.pointer_pvm)
    require(std::abs(p.trace().real() - 1.0) <= tol.eps_residual, ErrorCode::TheoremViolation,
            "pointer projections of the observable model must be rank one");
  return model;
}

}  // namespace qdilate
