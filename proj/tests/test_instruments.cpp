#include <doctest.h>

#include "qdilate/instruments.hpp"
#include "support/test_helpers.hpp"

using namespace qdilate;
using namespace qdilate::testing;

namespace {

DiscreteInstrument qubit_z_luders() { return luders_instrument(validate_povm(qubit_z_effects())); }

DiscreteInstrument coin_identity_instrument() {
  const Complex inv_root2(1.0 / std::sqrt(2.0), 0.0);
  const CMatrix half = CMatrix::identity(2) * inv_root2;
  return validate_instrument(2, {{half}, {half}});
}

}  // namespace

TEST_CASE("validate_instrument rejects non-channels and empty outcomes") {
  const CMatrix id2 = CMatrix::identity(2);
  try {
    validate_instrument(2, {{id2}, {id2}});
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
  try {
    validate_instrument(2, {{id2}, {CMatrix(2, 2)}});
    FAIL("expected ZeroEffect");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroEffect);
  }
}

TEST_CASE("Heisenberg action is unital") {
  const DiscreteInstrument instr = qubit_z_luders();
  const CMatrix total = apply_heisenberg(instr, {0, 1}, CMatrix::identity(2));
  CHECK(frob_diff(total, CMatrix::identity(2)) <= 1e-12);
}

TEST_CASE("Heisenberg action of a unitary outcome is conjugation") {
  SplitMix64 rng(201);
  const CMatrix u = random_unitary(rng, 3);
  const DiscreteInstrument instr = validate_instrument(3, {{u}});
  const CMatrix b = random_hermitian(rng, 3);
  CHECK(frob_diff(apply_heisenberg(instr, {0}, b), u.adjoint() * b * u) <= 1e-12);
}

TEST_CASE("Heisenberg and Schroedinger pictures agree under the trace pairing") {
  SplitMix64 rng(202);
  const DiscreteInstrument instr = random_instrument(rng, 3, {2, 1});
  const CMatrix b = random_complex_matrix(rng, 3, 3);
  const CMatrix t = random_density_matrix(rng, 3);
  for (std::size_t i = 0; i < 2; ++i) {
    const Complex heisenberg = (apply_heisenberg(instr, {i}, b) * t).trace();
    const Complex schrodinger = (b * schrodinger_apply(instr.outcomes[i], t)).trace();
    CHECK(std::abs(heisenberg - schrodinger) <= 1e-12);
  }
}

TEST_CASE("Heisenberg action is additive over disjoint outcome sets") {
  SplitMix64 rng(203);
  const DiscreteInstrument instr = random_instrument(rng, 2, {1, 2, 1});
  const CMatrix b = random_hermitian(rng, 2);
  const CMatrix split =
      apply_heisenberg(instr, {0}, b) + apply_heisenberg(instr, {1, 2}, b);
  CHECK(frob_diff(split, apply_heisenberg(instr, {0, 1, 2}, b)) <= 1e-12);
}

TEST_CASE("associated observable of the Z Lueders instrument is the Z PVM") {
  const DiscretePOVM m = associated_observable(qubit_z_luders());
  CHECK(frob_diff(m.effects[0], qubit_proj(0)) <= 1e-12);
  CHECK(frob_diff(m.effects[1], qubit_proj(1)) <= 1e-12);
}

TEST_CASE("associated observable of the coin instrument is trivial") {
  const DiscretePOVM m = associated_observable(coin_identity_instrument());
  CHECK(frob_diff(m.effects[0], CMatrix::identity(2) * Complex(0.5, 0.0)) <= 1e-12);
  CHECK(classify(m).is_trivial);
}

TEST_CASE("associated observable of a random instrument is normalized") {
  SplitMix64 rng(204);
  const DiscreteInstrument instr = random_instrument(rng, 3, {2, 3});
  const DiscretePOVM m = associated_observable(instr);
  CMatrix sum(3, 3);
  for (const CMatrix& effect : m.effects) sum += effect;
  CHECK(frob_diff(sum, CMatrix::identity(3)) <= 1e-9);
}

TEST_CASE("induced channel concatenates the outcome lists") {
  SplitMix64 rng(205);
  const DiscreteInstrument single = random_instrument(rng, 2, {3});
  CHECK(induced_channel(single).size() == 3);
  CHECK(induced_channel(single)[1] == single.outcomes[0][1]);

  const KrausList dephasing = induced_channel(qubit_z_luders());
  REQUIRE(dephasing.size() == 2);
  CHECK(frob_diff(dephasing[0], qubit_proj(0)) <= 1e-12);
  CHECK(frob_diff(dephasing[1], qubit_proj(1)) <= 1e-12);
}

TEST_CASE("minimize_kraus merges duplicates") {
  SplitMix64 rng(206);
  const CMatrix a = random_complex_matrix(rng, 2, 2);
  const KrausList minimal = minimize_kraus({a, a});
  REQUIRE(minimal.size() == 1);
  CHECK(frob_diff(minimal[0] * minimal[0].adjoint(), a * a.adjoint() * Complex(2.0, 0.0)) <= 1e-9);
}

TEST_CASE("minimize_kraus keeps an independent list intact") {
  const KrausList minimal = minimize_kraus({qubit_proj(0), qubit_proj(1)});
  CHECK(minimal.size() == 2);
}

TEST_CASE("minimize_kraus undoes an isometric blow-up") {
  SplitMix64 rng(207);
  const CMatrix a0 = random_complex_matrix(rng, 3, 3);
  const CMatrix a1 = random_complex_matrix(rng, 3, 3);
  const CMatrix mix = random_isometry(rng, 4, 2);  // 4 redundant operators from 2
  KrausList blown;
  for (std::size_t t = 0; t < 4; ++t)
    blown.push_back(a0 * mix(t, 0) + a1 * mix(t, 1));

  const KrausList minimal = minimize_kraus(blown);
  CHECK(minimal.size() == 2);
  CHECK(choi_rank_oracle(blown) == 2);
  // same completely positive map: equal Choi matrices
  CHECK(frob_diff(choi_matrix(minimal), choi_matrix(blown)) <= 1e-9);
}

TEST_CASE("minimize_kraus rejects all-zero lists") {
  try {
    minimize_kraus({CMatrix(2, 2), CMatrix(2, 2)});
    FAIL("expected AllZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllZero);
  }
}

TEST_CASE("minimal length equals the Choi rank on random lists") {
  SplitMix64 rng(208);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const std::size_t count = 1 + trial % 4;
    KrausList ops;
    for (std::size_t s = 0; s < count; ++s) ops.push_back(random_complex_matrix(rng, d, d));
    if (trial % 2 == 0) ops.push_back(ops.front() * Complex(0.25, -1.0));  // force redundancy
    CHECK(minimize_kraus(ops).size() == choi_rank_oracle(ops));
  }
}

TEST_CASE("Kraus rank vector of the Z Lueders instrument") {
  const KrausRankVector rv = kraus_rank_vector(qubit_z_luders());
  CHECK(rv.ranks == std::vector<std::size_t>{1, 1});
  CHECK(rv.total == 2);
}

TEST_CASE("Kraus rank vector ignores isometric blow-ups of an outcome") {
  SplitMix64 rng(209);
  const DiscreteInstrument instr = random_instrument(rng, 2, {2, 1});
  // spread the first operator of outcome 0 over three proportional copies
  const CMatrix mix = random_isometry(rng, 3, 1);
  KrausList outcome0;
  for (std::size_t t = 0; t < 3; ++t) outcome0.push_back(instr.outcomes[0][0] * mix(t, 0));
  outcome0.push_back(instr.outcomes[0][1]);
  const DiscreteInstrument redundant = validate_instrument(2, {outcome0, instr.outcomes[1]});
  CHECK(kraus_rank_vector(redundant).ranks == kraus_rank_vector(instr).ranks);
}

TEST_CASE("Kraus rank respects the m_i d bound") {
  SplitMix64 rng(210);
  const DiscreteInstrument instr = random_instrument(rng, 2, {3, 1});
  const KrausRankVector rv = kraus_rank_vector(instr);
  CHECK(rv.ranks[0] == 3);
  const auto ranks = decompose_effects(associated_observable(instr)).rank_vector();
  CHECK(rv.ranks[0] <= ranks[0] * 2);
}

TEST_CASE("structure vectors of the Z Lueders instrument are the basis vectors") {
  const DiscreteInstrument instr = qubit_z_luders();
  const EffectDecomposition dec = decompose_effects(associated_observable(instr));
  const StructureVectors sv = structure_vectors(instr, dec);
  CHECK(sv.vectors[0][0][0] == canonical_basis_vector(2, 0));
  CHECK(sv.vectors[1][0][0] == canonical_basis_vector(2, 1));
}

TEST_CASE("structure vectors of the coin instrument are the canonical basis") {
  const DiscreteInstrument instr = coin_identity_instrument();
  const EffectDecomposition dec = decompose_effects(associated_observable(instr));
  const StructureVectors sv = structure_vectors(instr, dec);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) {
      // A_i g_ik = (1/sqrt2) I * sqrt2 h_k = h_k
      CHECK(vec_norm(vec_sub(sv.vectors[i][k][0], dec.outcomes[i].eigenvectors[k])) <= 1e-12);
    }
}

TEST_CASE("structure vectors satisfy the orthogonality relation on random instruments") {
  SplitMix64 rng(211);
  const DiscreteInstrument instr = minimize_instrument(random_instrument(rng, 3, {2, 2}), {});
  const EffectDecomposition dec = decompose_effects(associated_observable(instr));
  const StructureVectors sv = structure_vectors(instr, dec);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t mi = dec.outcomes[i].rank();
    for (std::size_t k = 0; k < mi; ++k)
      for (std::size_t l = 0; l < mi; ++l) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < instr.outcomes[i].size(); ++s)
          acc += vdot(sv.vectors[i][k][s], sv.vectors[i][l][s]);
        CHECK(std::abs(acc - (k == l ? 1.0 : 0.0)) <= 1e-9);
      }
  }
}

TEST_CASE("structure vectors reject mismatched inputs") {
  SplitMix64 rng(212);
  const DiscreteInstrument instr = qubit_z_luders();
  const EffectDecomposition wrong = decompose_effects(random_povm(rng, 2, 2));
  CHECK_THROWS_AS(structure_vectors(instr, wrong), Error);
}

TEST_CASE("Lueders instrument of a PVM keeps the projections") {
  const DiscreteInstrument instr = qubit_z_luders();
  CHECK(frob_diff(instr.outcomes[0][0], qubit_proj(0)) <= 1e-12);
  CHECK(frob_diff(instr.outcomes[1][0], qubit_proj(1)) <= 1e-12);
}

TEST_CASE("Lueders instrument of the coin observable") {
  const DiscreteInstrument instr = luders_instrument(validate_povm(coin_effects()));
  const CMatrix expected = CMatrix::identity(2) * Complex(1.0 / std::sqrt(2.0), 0.0);
  CHECK(frob_diff(instr.outcomes[0][0], expected) <= 1e-12);
}

TEST_CASE("Lueders instrument measures its observable") {
  SplitMix64 rng(213);
  const DiscretePOVM m = random_povm(rng, 3, 3);
  const DiscretePOVM rebuilt = associated_observable(luders_instrument(m));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(frob_diff(rebuilt.effects[i], m.effects[i]) <= 1e-9);
}

TEST_CASE("rank-1 instrument from the eigenvectors reduces to Lueders") {
  SplitMix64 rng(214);
  const DiscretePOVM m = random_povm(rng, 2, 2);
  const EffectDecomposition dec = decompose_effects(m);
  std::vector<std::vector<CVector>> phi;
  for (const auto& o : dec.outcomes) phi.push_back(o.eigenvectors);
  const DiscreteInstrument instr = rank1_instrument_with_vectors(m, phi);
  const DiscreteInstrument luders = luders_instrument(m);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(frob_diff(instr.outcomes[i][0], luders.outcomes[i][0]) <= 1e-9);
}

TEST_CASE("rank-1 instrument with a rotated apparatus basis still measures the coin") {
  const DiscretePOVM m = validate_povm(coin_effects());
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  const CVector plus = {Complex(inv_root2, 0.0), Complex(inv_root2, 0.0)};
  const CVector minus = {Complex(inv_root2, 0.0), Complex(-inv_root2, 0.0)};
  std::vector<std::vector<CVector>> phi = {
      {canonical_basis_vector(2, 0), canonical_basis_vector(2, 1)}, {plus, minus}};
  const DiscreteInstrument instr = rank1_instrument_with_vectors(m, phi);
  const DiscretePOVM rebuilt = associated_observable(instr);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(frob_diff(rebuilt.effects[i], m.effects[i]) <= 1e-9);
}

TEST_CASE("rank-1 instrument rejects repeated structure vectors") {
  const DiscretePOVM m = validate_povm(coin_effects());
  const CVector e0 = canonical_basis_vector(2, 0);
  std::vector<std::vector<CVector>> phi = {{e0, e0},
                                           {canonical_basis_vector(2, 0), canonical_basis_vector(2, 1)}};
  try {
    rank1_instrument_with_vectors(m, phi);
    FAIL("expected NotOrthonormal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOrthonormal);
    CHECK(e.index() == std::size_t{0});
  }
}

TEST_CASE("rank-1 instrument rejects wrong vector counts") {
  const DiscretePOVM m = validate_povm(coin_effects());
  std::vector<std::vector<CVector>> phi = {{canonical_basis_vector(2, 0)},
                                           {canonical_basis_vector(2, 0), canonical_basis_vector(2, 1)}};
  try {
    rank1_instrument_with_vectors(m, phi);
    FAIL("expected CountMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CountMismatch);
  }
}

TEST_CASE("isometric channels force trivial observables") {
  SplitMix64 rng(215);
  const CMatrix u = random_unitary(rng, 2);
  const DiscreteInstrument instr = validate_instrument(
      2, {{u * Complex(std::sqrt(0.3), 0.0)}, {u * Complex(std::sqrt(0.7), 0.0)}});
  const NoInfoReport report = check_no_info_without_disturbance(instr);
  REQUIRE(report.applicable);
  CHECK(report.probabilities[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(report.probabilities[1] == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(report.max_residual <= 1e-9);
}

TEST_CASE("no-info check does not apply to the Z Lueders instrument") {
  const NoInfoReport report = check_no_info_without_disturbance(qubit_z_luders());
  CHECK_FALSE(report.applicable);
}

TEST_CASE("no-info check on a random rank-1-channel instrument") {
  SplitMix64 rng(216);
  const CMatrix v = random_unitary(rng, 3);
  // coefficients c_is with sum of squares 1
  std::vector<std::vector<double>> weights = {{0.3, 0.2}, {0.5}};
  std::vector<KrausList> outcomes;
  for (const auto& outcome_weights : weights) {
    KrausList ops;
    for (double w : outcome_weights) {
      const Complex phase = std::polar(std::sqrt(w), rng.next_uniform());
      ops.push_back(v * phase);
    }
    outcomes.push_back(std::move(ops));
  }
  const DiscreteInstrument instr = validate_instrument(3, outcomes);
  const NoInfoReport report = check_no_info_without_disturbance(instr);
  REQUIRE(report.applicable);
  CHECK(report.max_residual <= 1e-9);
  CHECK(report.probabilities[0] == doctest::Approx(0.5).epsilon(1e-9));
}
