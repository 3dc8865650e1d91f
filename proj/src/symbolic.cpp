#include "qdilate/symbolic.hpp"

#include <algorithm>
#include <set>

namespace qdilate {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Extendable: return "Extendable";
    case Verdict::NotExtendable: return "NotExtendable";
    case Verdict::ExtendableAfterPlusOne: return "ExtendableAfterPlusOne";
  }
  return "Unknown";
}

const char* decision_rule_name(DecisionRule r) {
  switch (r) {
    case DecisionRule::FiniteDimA: return "FiniteDimA";
    case DecisionRule::NonSeparableB: return "NonSeparableB";
    case DecisionRule::CorankZeroB1: return "CorankZeroB1";
    case DecisionRule::CorankInfinite: return "CorankInfinite";
    case DecisionRule::CorankFiniteObstruction: return "CorankFiniteObstruction";
    case DecisionRule::FiniteEffectRank: return "FiniteEffectRank";
    case DecisionRule::NotRankInfinity: return "NotRankInfinity";
  }
  return "Unknown";
}

ExtDim corank(const IndexIsometry& iso) {
  const ExtDim target = iso.target_base * iso.fibers;

  if (const auto* shift = std::get_if<IndexIsometry::Shift>(&iso.rule)) {
    require(iso.source.is_infinite() && iso.target_base.is_infinite(), ErrorCode::InvalidInput,
            "shift rule needs infinite source and base");
    require(iso.fibers == ExtDim::finite(1), ErrorCode::InvalidInput,
            "shift rule is defined for a single fiber");
    // image misses exactly the first `offset` base indices
    return ExtDim::finite(shift->offset);
  }

  if (const auto* embed = std::get_if<IndexIsometry::EmbedPerFiber>(&iso.rule)) {
    require(embed->stride >= 1, ErrorCode::InvalidInput, "stride must be >= 1");
    require(iso.target_base.is_infinite(), ErrorCode::InvalidInput,
            "per-fiber embedding needs an infinite base");
    if (embed->stride == 1) return ExtDim::finite(0);  // relabels the whole target
    return ExtDim::infinite();  // misses infinitely many base indices in each fiber
  }

  if (const auto* diag = std::get_if<IndexIsometry::Diagonal>(&iso.rule)) {
    require(iso.source.is_infinite() && iso.target_base.is_infinite(), ErrorCode::InvalidInput,
            "diagonal rule needs infinite source and base");
    require(!diag->cycle.empty(), ErrorCode::InvalidInput, "diagonal rule needs a fiber cycle");
    for (std::size_t f : diag->prefix)
      require(iso.fibers.is_infinite() || f < iso.fibers.value(), ErrorCode::InvalidInput,
              "prefix fiber index out of range");
    for (std::size_t f : diag->cycle)
      require(iso.fibers.is_infinite() || f < iso.fibers.value(), ErrorCode::InvalidInput,
              "cycle fiber index out of range");
    // each base index n is hit in exactly one fiber, so the complement is
    // (fibers - 1) holes per base index
    if (iso.fibers == ExtDim::finite(1)) return ExtDim::finite(0);
    return ExtDim::infinite();
  }

  const auto& table = std::get<IndexIsometry::FiniteTable>(iso.rule);
  require(iso.source.is_finite() && iso.target_base.is_finite() && iso.fibers.is_finite(),
          ErrorCode::InvalidInput, "finite table needs finite index sets");
  require(table.map.size() == iso.source.value(), ErrorCode::InvalidInput,
          "table size must equal the source cardinality");
  std::set<std::pair<std::size_t, std::size_t>> image;
  for (const auto& [base, fiber] : table.map) {
    require(base < iso.target_base.value() && fiber < iso.fibers.value(), ErrorCode::InvalidInput,
            "table entry out of range");
    if (!image.insert({base, fiber}).second)
      throw Error(ErrorCode::NotInjective, "finite table maps two source indices to one target");
  }
  return ExtDim::finite(target.value() - image.size());
}

ExtDim corank_with_added_infinite_fiber(const IndexIsometry& iso) {
  corank(iso);  // validates the map, including injectivity
  return ExtDim::infinite();
}

ExtendabilityVerdict decide_extendability(const ExtDim& dim_a, const ExtDim& dim_b,
                                          const ExtDim& co_rank, bool non_separable_b) {
  require(!(dim_a.is_finite() && dim_a.value() == 0), ErrorCode::InvalidInput, "dim A must be >= 1");
  require(!(dim_b.is_finite() && dim_b.value() == 0), ErrorCode::InvalidInput, "dim B must be >= 1");

  if (!non_separable_b) {
    // dim(A) dim(B) = dim(A) + corank forces the finite cases exactly.
    if (dim_a.is_finite()) {
      if (dim_b.is_finite()) {
        const std::size_t expected = dim_a.value() * (dim_b.value() - 1);
        require(co_rank == ExtDim::finite(expected), ErrorCode::InconsistentCorank,
                "finite dimensions force co-rank dimA * (dimB - 1)");
      } else {
        require(co_rank.is_infinite(), ErrorCode::InconsistentCorank,
                "finite system with infinite apparatus forces infinite co-rank");
      }
    } else {
      require(dim_leq(co_rank, dim_a * dim_b), ErrorCode::InconsistentCorank,
              "co-rank exceeds the dilation dimension");
    }
  }

  ExtendabilityVerdict out;
  out.witness_corank = co_rank;
  if (dim_a.is_finite()) {
    out.verdict = Verdict::Extendable;
    out.rule_fired = DecisionRule::FiniteDimA;
    return out;
  }
  if (non_separable_b) {
    out.verdict = Verdict::Extendable;
    out.rule_fired = DecisionRule::NonSeparableB;
    return out;
  }
  if (dim_b == ExtDim::finite(1)) {
    if (co_rank == ExtDim::finite(0)) {
      out.verdict = Verdict::Extendable;
      out.rule_fired = DecisionRule::CorankZeroB1;
    } else {
      out.verdict = Verdict::NotExtendable;
      out.rule_fired = DecisionRule::CorankFiniteObstruction;
      out.plus_one_recommended = true;
    }
    return out;
  }
  if (co_rank.is_infinite()) {
    out.verdict = Verdict::Extendable;
    out.rule_fired = DecisionRule::CorankInfinite;
  } else {
    out.verdict = Verdict::NotExtendable;
    out.rule_fired = DecisionRule::CorankFiniteObstruction;
    out.plus_one_recommended = true;
  }
  return out;
}

ExtendabilityVerdict decide_from_ranks(const std::vector<ExtDim>& effect_ranks,
                                       const ExtDim& sys_dim) {
  require(!effect_ranks.empty(), ErrorCode::EmptyObservable, "observable has no outcomes");
  for (const ExtDim& r : effect_ranks) {
    require(!(r.is_finite() && r.value() == 0), ErrorCode::InvalidInput, "effect rank must be >= 1");
    require(dim_leq(r, sys_dim), ErrorCode::InvalidInput,
            "effect rank cannot exceed the system dimension");
  }
  ExtendabilityVerdict out;
  if (sys_dim.is_finite()) {
    out.verdict = Verdict::Extendable;
    out.rule_fired = DecisionRule::FiniteDimA;
    return out;
  }
  const bool some_finite =
      std::any_of(effect_ranks.begin(), effect_ranks.end(), [](const ExtDim& r) { return r.is_finite(); });
  if (some_finite) {
    out.verdict = Verdict::Extendable;
    out.rule_fired = DecisionRule::FiniteEffectRank;
    return out;
  }
  // All ranks infinite: undecidable at this level, but one extra apparatus
  // dimension always restores a unitary realization.
  out.verdict = Verdict::ExtendableAfterPlusOne;
  out.rule_fired = DecisionRule::NotRankInfinity;
  out.plus_one_recommended = true;
  return out;
}

NamedFixture von_neumann_lueders_fixture(const ExtDim& d, std::size_t n_outcomes) {
  require(n_outcomes >= 1, ErrorCode::InvalidInput, "need at least one outcome");
  NamedFixture f;
  f.name = "von_neumann_lueders_sharp";
  f.note = "sharp observable measured with structure vectors equal to the effect eigenvectors";
  f.dim_a = d;
  f.dim_b = ExtDim::finite(n_outcomes);
  f.expected = Verdict::Extendable;

  IndexIsometry iso;
  iso.source = d;
  iso.target_base = d;
  iso.fibers = ExtDim::finite(n_outcomes);
  if (d.is_finite()) {
    // joint eigenbasis index n keeps its position and lands in the fiber of
    // its outcome; outcomes split the basis as evenly as possible
    IndexIsometry::FiniteTable table;
    for (std::size_t n = 0; n < d.value(); ++n) table.map.emplace_back(n, n % n_outcomes);
    iso.rule = std::move(table);
    std::vector<std::size_t> counts(n_outcomes, 0);
    for (std::size_t n = 0; n < d.value(); ++n) ++counts[n % n_outcomes];
    for (std::size_t c : counts)
      if (c > 0) f.effect_ranks.push_back(ExtDim::finite(c));
  } else {
    IndexIsometry::Diagonal diag;
    for (std::size_t i = 0; i < n_outcomes; ++i) diag.cycle.push_back(i);
    iso.rule = std::move(diag);
    f.effect_ranks.assign(n_outcomes, ExtDim::infinite());
  }
  f.isometry = std::move(iso);
  return f;
}

std::vector<NamedFixture> fixture_library() {
  std::vector<NamedFixture> out;

  {
    NamedFixture f;
    f.name = "shift_isometry";
    f.note = "one-step shift on an infinite basis; the leaked first basis vector blocks extension";
    f.dim_a = ExtDim::infinite();
    f.dim_b = ExtDim::finite(1);
    IndexIsometry iso;
    iso.source = ExtDim::infinite();
    iso.target_base = ExtDim::infinite();
    iso.fibers = ExtDim::finite(1);
    iso.rule = IndexIsometry::Shift{1};
    f.isometry = std::move(iso);
    f.effect_ranks = {ExtDim::infinite()};
    f.expected = Verdict::NotExtendable;
    out.push_back(std::move(f));
  }
  {
    NamedFixture f;
    f.name = "rank_inf_sharp_relabel";
    f.note = "sharp rank-infinity observable whose structure vectors fill the whole target";
    f.dim_a = ExtDim::infinite();
    f.dim_b = ExtDim::finite(2);
    IndexIsometry iso;
    iso.source = ExtDim::infinite();
    iso.target_base = ExtDim::infinite();
    iso.fibers = ExtDim::finite(2);
    iso.rule = IndexIsometry::EmbedPerFiber{1};
    f.isometry = std::move(iso);
    f.effect_ranks = {ExtDim::infinite(), ExtDim::infinite()};
    f.expected = Verdict::NotExtendable;
    out.push_back(std::move(f));
  }
  {
    NamedFixture f;
    f.name = "even_index_embedding";
    f.note = "structure vectors on even basis indices leave infinitely many holes";
    f.dim_a = ExtDim::infinite();
    f.dim_b = ExtDim::finite(2);
    IndexIsometry iso;
    iso.source = ExtDim::infinite();
    iso.target_base = ExtDim::infinite();
    iso.fibers = ExtDim::finite(2);
    iso.rule = IndexIsometry::EmbedPerFiber{2};
    f.isometry = std::move(iso);
    f.effect_ranks = {ExtDim::infinite(), ExtDim::infinite()};
    f.expected = Verdict::Extendable;
    out.push_back(std::move(f));
  }
  out.push_back(von_neumann_lueders_fixture(ExtDim::infinite(), 2));
  {
    NamedFixture f;
    f.name = "two_outcome_lambda";
    f.note = "two-outcome observable with infinitely many eigenvalues strictly inside (0,1); "
             "difference vectors sqrt(l2) Psi_1 - sqrt(l1) Psi_2 span an infinite co-kernel";
    f.dim_a = ExtDim::infinite();
    f.dim_b = ExtDim::finite(2);
    // general-coefficient isometry: co-rank stored as a known constant
    f.given_corank = ExtDim::infinite();
    f.effect_ranks = {ExtDim::infinite(), ExtDim::infinite()};
    f.expected = Verdict::Extendable;
    out.push_back(std::move(f));
  }
  {
    NamedFixture f;
    f.name = "sharp_with_finite_rank_effect";
    f.note = "first outcome of rank one, rest infinite; a finite-rank effect forces extendability";
    f.dim_a = ExtDim::infinite();
    f.dim_b = ExtDim::finite(2);
    IndexIsometry iso;
    iso.source = ExtDim::infinite();
    iso.target_base = ExtDim::infinite();
    iso.fibers = ExtDim::finite(2);
    iso.rule = IndexIsometry::Diagonal{{0}, {1}};
    f.isometry = std::move(iso);
    f.effect_ranks = {ExtDim::finite(1), ExtDim::infinite()};
    f.expected = Verdict::Extendable;
    out.push_back(std::move(f));
  }
  return out;
}

ExtendabilityVerdict decide_fixture(const NamedFixture& fixture) {
  ExtDim co_rank = ExtDim::finite(0);
  if (fixture.isometry.has_value()) {
    co_rank = corank(*fixture.isometry);
  } else {
    require(fixture.given_corank.has_value(), ErrorCode::InvalidInput,
            "fixture carries neither an isometry nor a co-rank");
    co_rank = *fixture.given_corank;
  }
  return decide_extendability(fixture.dim_a, fixture.dim_b, co_rank);
}

}  // namespace qdilate
