#pragma once

// Sofic approximation levels: maps g -> permutation of {0..d-1}.
//
// Composition convention: sigma(g)sigma(h)(k) = sigma(g)(sigma(h)(k)), so a
// level is multiplicative when sigma(gh) = sigma(g) o sigma(h).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "soficrank/group.hpp"

namespace soficrank {

/// perm[k] is the image of k. Always a bijection of {0..size-1}.
using Permutation = std::vector<std::uint32_t>;

Permutation identity_permutation(std::size_t degree);
/// (a o b)[k] = a[b[k]].
Permutation compose(const Permutation& a, const Permutation& b);
Permutation invert(const Permutation& p);
bool is_bijection(const Permutation& p);
std::size_t fixed_points(const Permutation& p);

/// Box [0, side_0) x ... x [0, side_{d-1}) in Z^d; contains e = 0.
struct FolnerBox {
  std::vector<std::int64_t> sides;

  std::size_t dimension() const { return sides.size(); }
  std::size_t size() const;
  /// Lexicographic index of a point (last coordinate fastest).
  std::optional<std::size_t> index_of(const std::vector<std::int64_t>& p) const;
  std::vector<std::int64_t> point(std::size_t index) const;
};

enum class Provenance { FiniteQuotient, FolnerSet, ExplicitTable };

std::string to_string(Provenance p);

class SoficLevel {
 public:
  /// (Z/N_1 x ... x Z/N_d) acting on itself by translation.
  static SoficLevel torus_quotient(GroupPtr group,
                                   std::vector<std::int64_t> moduli,
                                   std::size_t index);
  /// Canonical amenable level on a Z^d box with the order-preserving
  /// completion bijection on the boundary.
  static SoficLevel folner(GroupPtr group, FolnerBox box, std::size_t index);
  /// One permutation per generator; sigma(g) composes along the normal form.
  /// For FiniteQuotient provenance the table must define a homomorphism
  /// (checked for free-abelian and finite groups).
  static SoficLevel from_generators(GroupPtr group,
                                    std::vector<Permutation> generators,
                                    Provenance provenance, std::size_t index,
                                    std::size_t chain_index = 0);
  /// Left-regular action of a finite group on itself.
  static SoficLevel regular(GroupPtr group, std::size_t index);

  std::size_t index() const noexcept { return index_; }
  std::size_t degree() const noexcept { return degree_; }
  const GroupPtr& group() const noexcept { return group_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::size_t chain_index() const noexcept { return chain_index_; }
  /// True when the level is an exact homomorphism (zero defect).
  bool exact() const noexcept { return provenance_ == Provenance::FiniteQuotient; }
  const std::optional<FolnerBox>& box() const noexcept { return box_; }
  const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }
  const std::vector<Permutation>& generator_permutations() const noexcept {
    return generators_;
  }
  std::string describe() const;

  /// sigma(g). Throws NotExpressible when g is outside the level's reach and
  /// GroupMismatch for a foreign element.
  Permutation permutation(const GroupElement& g) const;
  Permutation permutation(const Word& w) const;

 private:
  enum class Realization { Torus, Folner, Generators };

  SoficLevel() = default;
  Permutation folner_permutation(const Word& w) const;
  Permutation torus_permutation(const Word& w) const;
  Permutation generator_permutation(const Word& w) const;

  GroupPtr group_;
  std::size_t index_ = 0;
  std::size_t degree_ = 0;
  std::size_t chain_index_ = 0;
  Provenance provenance_ = Provenance::FiniteQuotient;
  Realization realization_ = Realization::Generators;
  std::vector<std::int64_t> moduli_;
  std::optional<FolnerBox> box_;
  std::vector<Permutation> generators_;
  std::vector<Permutation> generator_inverses_;
};

/// sigma_i(g) for the level.
inline Permutation sofic_permutation(const SoficLevel& level,
                                     const GroupElement& g) {
  return level.permutation(g);
}

struct PairDefect {
  GroupElement g;
  GroupElement h;
  /// Fraction of k with sigma(g)sigma(h)(k) == sigma(gh)(k).
  double multiplicative_fraction = 0.0;
  /// Fraction of k with sigma(g)(k) != sigma(h)(k); empty when g == h.
  std::optional<double> separation_fraction;
};

struct DefectReport {
  std::size_t level_index = 0;
  std::size_t degree = 0;
  std::vector<PairDefect> pairs;
};

DefectReport defect_statistics(
    const SoficLevel& level,
    const std::vector<std::pair<GroupElement, GroupElement>>& pairs);

enum class FreeCatalog { TransitiveRandom, CyclicCommuting, UserTables };

std::string to_string(FreeCatalog c);

struct QuotientSchedule {
  /// Z^d: the moduli N (degree N^d). Free groups with a catalog: degrees.
  std::vector<std::int64_t> sizes;
  FreeCatalog catalog = FreeCatalog::TransitiveRandom;
  std::uint64_t seed = 1;
  /// UserTables: one entry per level, one permutation per generator.
  std::vector<std::vector<Permutation>> tables;
};

/// Zero-defect levels of strictly increasing degree.
std::vector<SoficLevel> quotient_chain(const GroupPtr& group,
                                       const QuotientSchedule& schedule);

/// Canonical amenable levels on the boxes [0,N)^d, one per side length.
std::vector<SoficLevel> folner_levels(const GroupPtr& group,
                                      const std::vector<std::int64_t>& sides);

/// Deterministic 64-bit generator (splitmix64) with unbiased bounded draws.
/// Used wherever results must be reproducible across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

}  // namespace soficrank
