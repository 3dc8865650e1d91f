#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qdilate/error.hpp"

namespace qdilate {

/// Dimension that is either a finite count or countably infinite. No raw
/// subtraction: complements are computed where they are well defined.
class ExtDim {
public:
  static ExtDim finite(std::size_t n) { return ExtDim(n, false); }
  static ExtDim infinite() { return ExtDim(0, true); }

  bool is_finite() const noexcept { return !infinite_; }
  bool is_infinite() const noexcept { return infinite_; }
  std::size_t value() const {
    require(!infinite_, ErrorCode::InvalidInput, "no finite value of an infinite dimension");
    return value_;
  }

  bool operator==(const ExtDim& other) const = default;

  friend ExtDim operator*(const ExtDim& a, const ExtDim& b) {
    if ((a.is_finite() && a.value_ == 0) || (b.is_finite() && b.value_ == 0))
      return ExtDim::finite(0);
    if (a.infinite_ || b.infinite_) return ExtDim::infinite();
    return ExtDim::finite(a.value_ * b.value_);
  }
  friend ExtDim operator+(const ExtDim& a, const ExtDim& b) {
    if (a.infinite_ || b.infinite_) return ExtDim::infinite();
    return ExtDim::finite(a.value_ + b.value_);
  }
  /// a <= b in the cardinal order.
  friend bool dim_leq(const ExtDim& a, const ExtDim& b) {
    if (b.infinite_) return true;
    if (a.infinite_) return false;
    return a.value_ <= b.value_;
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

private:
  ExtDim(std::size_t v, bool inf) : value_(v), infinite_(inf) {}
  std::size_t value_;
  bool infinite_;
};

/// Injective basis-index map of a structured isometry
/// Y = sum |y_n><h_n| into a target of base x fiber indices. Restricted to
/// permutation-type (0/1-coefficient) isometries, given either as a finite
/// table or as a rule with a closed-form co-rank.
struct IndexIsometry {
  /// n -> n + offset on an infinite base with a single fiber.
  struct Shift {
    std::size_t offset = 1;
  };
  /// (k, i) -> (stride * k, i) in every fiber; stride 1 relabels the whole
  /// target, stride >= 2 leaves infinitely many holes per fiber.
  struct EmbedPerFiber {
    std::size_t stride = 1;
  };
  /// n -> (n, f(n)) with the fiber assignment given by a prefix then a
  /// repeating cycle.
  struct Diagonal {
    std::vector<std::size_t> prefix;
    std::vector<std::size_t> cycle;
  };
  /// Explicit map on finite index sets; source index -> (base, fiber).
  struct FiniteTable {
    std::vector<std::pair<std::size_t, std::size_t>> map;
  };
  using Rule = std::variant<Shift, EmbedPerFiber, Diagonal, FiniteTable>;

  ExtDim source = ExtDim::infinite();
  ExtDim target_base = ExtDim::infinite();
  ExtDim fibers = ExtDim::finite(1);
  Rule rule = Shift{};
};

/// Cardinality of target minus image; exact by rule.
ExtDim corank(const IndexIsometry& iso);

/// Co-rank after enlarging the target by one extra fiber of countably many
/// indices; always countably infinite, which is what restores extendability.
ExtDim corank_with_added_infinite_fiber(const IndexIsometry& iso);

enum class Verdict { Extendable, NotExtendable, ExtendableAfterPlusOne };

enum class DecisionRule {
  FiniteDimA,
  NonSeparableB,
  CorankZeroB1,
  CorankInfinite,
  CorankFiniteObstruction,
  FiniteEffectRank,
  NotRankInfinity,
};

const char* verdict_name(Verdict v);
const char* decision_rule_name(DecisionRule r);

struct ExtendabilityVerdict {
  Verdict verdict = Verdict::Extendable;
  DecisionRule rule_fired = DecisionRule::FiniteDimA;
  std::optional<ExtDim> witness_corank;
  bool plus_one_recommended = false;  // always true for NotExtendable
};

/// Decides the unitary extension problem from the space dimensions and the
/// co-rank of the isometry's image. Exactly one rule fires.
ExtendabilityVerdict decide_extendability(const ExtDim& dim_a, const ExtDim& dim_b,
                                          const ExtDim& corank, bool non_separable_b = false);

/// Rank-level decision: systems of finite dimension or observables with a
/// finite-rank effect are always extendable; all-infinite ranks fall back to
/// the plus-one guarantee.
ExtendabilityVerdict decide_from_ranks(const std::vector<ExtDim>& effect_ranks,
                                       const ExtDim& sys_dim);

/// Named extension scenarios with known outcomes; used as reference inputs.
struct NamedFixture {
  std::string name;
  std::string note;
  ExtDim dim_a = ExtDim::infinite();
  ExtDim dim_b = ExtDim::finite(1);
  std::optional<IndexIsometry> isometry;
  std::optional<ExtDim> given_corank;  // used when no isometry realizes it
  std::vector<ExtDim> effect_ranks;    // may be empty
  Verdict expected = Verdict::Extendable;
};

std::vector<NamedFixture> fixture_library();

/// The sharp-observable fixture with structure vectors chosen as the
/// effect eigenvectors, parameterized by system dimension and outcome count;
/// its co-rank is d * (N - 1).
NamedFixture von_neumann_lueders_fixture(const ExtDim& d, std::size_t n_outcomes);

/// Verdict for a fixture: co-rank from its isometry (or stored constant)
/// fed into decide_extendability.
ExtendabilityVerdict decide_fixture(const NamedFixture& fixture);

}  // namespace qdilate
