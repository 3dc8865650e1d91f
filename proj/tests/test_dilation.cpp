#include <doctest.h>

#include "qdilate/dilation.hpp"
#include "support/test_helpers.hpp"

using namespace qdilate;
using namespace qdilate::testing;

namespace {

DiscreteInstrument qubit_z_luders() { return luders_instrument(validate_povm(qubit_z_effects())); }

StinespringDilation pad_with_unused_pointer(const StinespringDilation& dil) {
  StinespringDilation padded;
  padded.sys_dim = dil.sys_dim;
  padded.pointer_dim = dil.pointer_dim + 1;
  padded.pointer_labels = dil.pointer_labels;
  padded.pointer_labels.emplace_back(0, dil.kraus_of_outcome(0).size());
  padded.isometry = CMatrix(padded.sys_dim * padded.pointer_dim, padded.sys_dim);
  for (std::size_t m = 0; m < dil.sys_dim; ++m)
    for (std::size_t q = 0; q < dil.pointer_dim; ++q)
      for (std::size_t n = 0; n < dil.sys_dim; ++n)
        padded.isometry(m * padded.pointer_dim + q, n) = dil.isometry(m * dil.pointer_dim + q, n);
  for (std::size_t i = 0; i < dil.pointer_pvm.size(); ++i) {
    CMatrix proj(padded.pointer_dim, padded.pointer_dim);
    for (std::size_t q = 0; q < padded.pointer_dim; ++q)
      if (padded.pointer_labels[q].first == i) proj(q, q) = 1.0;
    padded.pointer_pvm.push_back(std::move(proj));
  }
  return padded;
}

}  // namespace

TEST_CASE("Stinespring dilation of the Z Lueders instrument") {
  const StinespringDilation dil = build_minimal_stinespring(qubit_z_luders());
  CHECK(dil.pointer_dim == 2);
  REQUIRE(dil.isometry.rows() == 4);
  // Y psi = <0|psi> |0> (x) e_0 + <1|psi> |1> (x) e_1
  CMatrix expected(4, 2);
  expected(0, 0) = 1.0;  // (system 0, pointer 0)
  expected(3, 1) = 1.0;  // (system 1, pointer 1)
  CHECK(frob_diff(dil.isometry, expected) <= 1e-12);
}

TEST_CASE("Stinespring dilation of the coin instrument") {
  const Complex inv_root2(1.0 / std::sqrt(2.0), 0.0);
  const CMatrix half = CMatrix::identity(2) * inv_root2;
  const DiscreteInstrument instr = validate_instrument(2, {{half}, {half}});
  const StinespringDilation dil = build_minimal_stinespring(instr);
  CHECK(dil.pointer_dim == 2);
  // Y psi = psi (x) (e_0 + e_1)/sqrt(2)
  for (std::size_t n = 0; n < 2; ++n) {
    const CVector expected =
        vec_kron(canonical_basis_vector(2, n),
                 {Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0)});
    CHECK(vec_norm(vec_sub(dil.isometry.column(n), expected)) <= 1e-12);
  }
}

TEST_CASE("Stinespring dilation of a random d=3 instrument with ranks (2,1)") {
  SplitMix64 rng(301);
  const DiscreteInstrument instr = random_instrument(rng, 3, {2, 1});
  REQUIRE(kraus_rank_vector(instr).ranks == std::vector<std::size_t>{2, 1});
  const StinespringDilation dil = build_minimal_stinespring(instr);
  CHECK(dil.pointer_dim == 3);
  CHECK(dil.isometry.rows() == 9);
  CHECK(dil.isometry.cols() == 3);
  CHECK(frob_diff(dil.isometry.adjoint() * dil.isometry, CMatrix::identity(3)) <= 1e-9);
}

TEST_CASE("builder minimizes redundant Kraus lists first") {
  SplitMix64 rng(302);
  const DiscreteInstrument instr = random_instrument(rng, 2, {2});
  const CMatrix mix = random_isometry(rng, 4, 2);
  KrausList blown;
  for (std::size_t t = 0; t < 4; ++t)
    blown.push_back(instr.outcomes[0][0] * mix(t, 0) + instr.outcomes[0][1] * mix(t, 1));
  const DiscreteInstrument redundant = validate_instrument(2, {blown});
  CHECK(build_minimal_stinespring(redundant).pointer_dim == 2);
}

TEST_CASE("verify_stinespring accepts builder output tightly") {
  const DiscreteInstrument instr = qubit_z_luders();
  const StinespringDilation dil = build_minimal_stinespring(instr);
  const StinespringReport report = verify_stinespring(dil, instr);
  CHECK(report.pass);
  CHECK(report.max_residual <= 1e-12);
}

TEST_CASE("verify_stinespring detects a perturbed isometry") {
  const DiscreteInstrument instr = qubit_z_luders();
  StinespringDilation dil = build_minimal_stinespring(instr);
  dil.isometry(1, 0) += 1e-3;
  const StinespringReport report = verify_stinespring(dil, instr);
  CHECK_FALSE(report.pass);
  CHECK(report.max_residual > 1e-4);
}

TEST_CASE("verify_stinespring passes on a random corpus") {
  SplitMix64 rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + trial % 3;
    std::vector<std::size_t> counts(1 + trial % 3);
    for (auto& c : counts) c = 1 + rng.next_u64() % (d * d);
    const DiscreteInstrument instr = random_instrument(rng, d, counts);
    const StinespringDilation dil = build_minimal_stinespring(instr);
    const StinespringReport report = verify_stinespring(dil, instr);
    CHECK(report.pass);
    CHECK(report.max_residual <= 1e-9);
  }
}

TEST_CASE("minimality of the Z Lueders dilation, span rank hand-countable") {
  const DiscreteInstrument instr = qubit_z_luders();
  const StinespringDilation dil = build_minimal_stinespring(instr);
  CHECK(check_minimality(dil, instr));

  // independent span-rank count: vectors (E_nm (x) P_i) Y h_l
  std::vector<CVector> collection;
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t l = 0; l < 2; ++l) {
          const CMatrix op = kron(CMatrix::unit(2, n, m), dil.pointer_pvm[i]);
          collection.push_back(op.apply(dil.isometry.column(l)));
        }
  CMatrix stacked(4, collection.size());
  for (std::size_t c = 0; c < collection.size(); ++c) stacked.set_column(c, collection[c]);
  CHECK(numerical_rank(stacked) == 4);
}

TEST_CASE("padded dilation is detected as non-minimal") {
  const DiscreteInstrument instr = qubit_z_luders();
  const StinespringDilation padded = pad_with_unused_pointer(build_minimal_stinespring(instr));
  CHECK(verify_stinespring(padded, instr).pass);
  CHECK_FALSE(check_minimality(padded, instr));
}

TEST_CASE("minimality holds on a random corpus") {
  SplitMix64 rng(304);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t d = 2 + trial % 3;
    std::vector<std::size_t> counts(1 + trial % 2);
    for (auto& c : counts) c = 1 + rng.next_u64() % d;
    const DiscreteInstrument instr = random_instrument(rng, d, counts);
    const StinespringDilation dil = build_minimal_stinespring(instr);
    CHECK(check_minimality(dil, instr));
  }
}
