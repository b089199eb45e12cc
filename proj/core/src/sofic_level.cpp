#include "soficrank/sofic_level.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "soficrank/errors.hpp"

namespace soficrank {

Permutation identity_permutation(std::size_t degree) {
  Permutation p(degree);
  for (std::size_t k = 0; k < degree; ++k) p[k] = static_cast<std::uint32_t>(k);
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw ValidationError("composing permutations of different degree");
  Permutation out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[b[k]];
  return out;
}

Permutation invert(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[p[k]] = static_cast<std::uint32_t>(k);
  return out;
}

bool is_bijection(const Permutation& p) {
  std::vector<char> hit(p.size(), 0);
  for (auto v : p) {
    if (v >= p.size() || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

std::size_t fixed_points(const Permutation& p) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < p.size(); ++k) n += p[k] == k;
  return n;
}

std::size_t FolnerBox::size() const {
  std::size_t n = 1;
  for (auto s : sides) n *= static_cast<std::size_t>(s);
  return n;
}

std::optional<std::size_t> FolnerBox::index_of(
    const std::vector<std::int64_t>& p) const {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < sides.size(); ++j) {
    if (p[j] < 0 || p[j] >= sides[j]) return std::nullopt;
    idx = idx * static_cast<std::size_t>(sides[j]) + static_cast<std::size_t>(p[j]);
  }
  return idx;
}

std::vector<std::int64_t> FolnerBox::point(std::size_t index) const {
  std::vector<std::int64_t> p(sides.size());
  for (std::size_t j = sides.size(); j-- > 0;) {
    const auto s = static_cast<std::size_t>(sides[j]);
    p[j] = static_cast<std::int64_t>(index % s);
    index /= s;
  }
  return p;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::FiniteQuotient: return "finite_quotient";
    case Provenance::FolnerSet: return "folner_set";
    case Provenance::ExplicitTable: return "explicit_table";
  }
  return {};
}

std::string to_string(FreeCatalog c) {
  switch (c) {
    case FreeCatalog::TransitiveRandom: return "transitive_random";
    case FreeCatalog::CyclicCommuting: return "cyclic_commuting";
    case FreeCatalog::UserTables: return "user_tables";
  }
  return {};
}

namespace {

constexpr std::size_t kMaxDegree = std::numeric_limits<std::uint32_t>::max();

std::size_t checked_degree(const std::vector<std::int64_t>& sides) {
  std::size_t n = 1;
  for (auto s : sides) {
    if (s < 1) throw ValidationError("box sides and moduli must be >= 1");
    if (n > kMaxDegree / static_cast<std::size_t>(s)) {
      throw BudgetExceeded("level degree overflows the permutation index type");
    }
    n *= static_cast<std::size_t>(s);
  }
  return n;
}

bool commute(const Permutation& a, const Permutation& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[b[k]] != b[a[k]]) return false;
  }
  return true;
}

std::size_t generator_offset(const GroupSpec& product, std::size_t factor) {
  std::size_t off = 0;
  for (std::size_t f = 0; f < factor; ++f) {
    off += product.factors()[f]->generator_count();
  }
  return off;
}

void check_homomorphism(const GroupSpec& group,
                        const std::vector<Permutation>& gens,
                        std::size_t offset) {
  switch (group.kind()) {
    case GroupKind::FreeAbelian:
      for (std::size_t i = 0; i < group.generator_count(); ++i) {
        for (std::size_t j = i + 1; j < group.generator_count(); ++j) {
          const auto& a = gens[offset + i];
          const auto& b = gens[offset + j];
          if (!a.empty() && !b.empty() && !commute(a, b)) {
            throw ValidationError("user table is not a homomorphism: generators " +
                                  group.generators()[i] + " and " +
                                  group.generators()[j] + " do not commute");
          }
        }
      }
      break;
    case GroupKind::Free:
      break;
    case GroupKind::Finite: {
      const auto k = static_cast<std::size_t>(group.rank());
      auto perm_of = [&](std::size_t e) -> const Permutation* {
        return e == 0 ? nullptr : &gens[offset + e - 1];
      };
      for (std::size_t a = 1; a < k; ++a) {
        for (std::size_t b = 1; b < k; ++b) {
          const auto ab = static_cast<std::size_t>(group.table()[a][b]);
          const Permutation& pa = *perm_of(a);
          const Permutation& pb = *perm_of(b);
          if (pa.empty() || pb.empty()) continue;
          Permutation lhs = compose(pa, pb);
          if (ab == 0) {
            if (lhs != identity_permutation(lhs.size())) {
              throw ValidationError("user table is not a homomorphism of the finite group");
            }
          } else if (!perm_of(ab)->empty() && lhs != *perm_of(ab)) {
            throw ValidationError("user table is not a homomorphism of the finite group");
          }
        }
      }
      break;
    }
    case GroupKind::DirectProduct: {
      for (std::size_t f = 0; f < group.factors().size(); ++f) {
        check_homomorphism(*group.factors()[f], gens, offset + generator_offset(group, f));
      }
      for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
          // Generators from different factors must commute.
          std::size_t fi = 0, fj = 0, acc = 0;
          for (std::size_t f = 0; f < group.factors().size(); ++f) {
            const auto c = group.factors()[f]->generator_count();
            if (i >= acc && i < acc + c) fi = f;
            if (j >= acc && j < acc + c) fj = f;
            acc += c;
          }
          if (fi != fj && !gens[i].empty() && !gens[j].empty() &&
              !commute(gens[i], gens[j])) {
            throw ValidationError(
                "user table is not a homomorphism: factors do not commute");
          }
        }
      }
      break;
    }
  }
}

// Applies sigma(w) to the point x using per-generator permutations.
std::uint32_t apply_word(const GroupSpec& group, const Word& w,
                         const std::vector<Permutation>& gens,
                         const std::vector<Permutation>& invs,
                         std::size_t offset, std::uint32_t x) {
  switch (group.kind()) {
    case GroupKind::FreeAbelian:
      // Canonical order sigma(x_0)^{e_0} o sigma(x_1)^{e_1} o ...: apply the
      // last generator first.
      for (std::size_t j = w.size(); j-- > 0;) {
        const auto e = w[j];
        const auto& p = e > 0 ? gens[offset + j] : invs[offset + j];
        for (std::int64_t t = 0; t < (e > 0 ? e : -e); ++t) x = p[x];
      }
      return x;
    case GroupKind::Free:
      for (std::size_t i = w.size(); i-- > 0;) {
        const auto letter = w[i];
        const auto g = static_cast<std::size_t>(letter > 0 ? letter : -letter) - 1;
        x = letter > 0 ? gens[offset + g][x] : invs[offset + g][x];
      }
      return x;
    case GroupKind::Finite:
      if (w[0] == 0) return x;
      return gens[offset + static_cast<std::size_t>(w[0]) - 1][x];
    case GroupKind::DirectProduct: {
      auto parts = group.split(w);
      for (std::size_t f = parts.size(); f-- > 0;) {
        x = apply_word(*group.factors()[f], parts[f], gens, invs,
                       offset + generator_offset(group, f), x);
      }
      return x;
    }
  }
  return x;
}

// Generators (by global index) that a word actually uses.
void used_generators(const GroupSpec& group, const Word& w, std::size_t offset,
                     std::vector<std::size_t>& out) {
  switch (group.kind()) {
    case GroupKind::FreeAbelian:
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] != 0) out.push_back(offset + j);
      }
      break;
    case GroupKind::Free:
      for (auto letter : w) {
        out.push_back(offset + static_cast<std::size_t>(letter > 0 ? letter : -letter) - 1);
      }
      break;
    case GroupKind::Finite:
      if (w[0] != 0) out.push_back(offset + static_cast<std::size_t>(w[0]) - 1);
      break;
    case GroupKind::DirectProduct: {
      auto parts = group.split(w);
      for (std::size_t f = 0; f < parts.size(); ++f) {
        used_generators(*group.factors()[f], parts[f],
                        offset + generator_offset(group, f), out);
      }
      break;
    }
  }
}

}  // namespace

SoficLevel SoficLevel::torus_quotient(GroupPtr group,
                                      std::vector<std::int64_t> moduli,
                                      std::size_t index) {
  if (!group || group->kind() != GroupKind::FreeAbelian) {
    throw UnsupportedGroup("torus quotients need a free abelian group");
  }
  if (moduli.size() != static_cast<std::size_t>(group->rank())) {
    throw ValidationError("one modulus per coordinate is required");
  }
  SoficLevel level;
  level.degree_ = checked_degree(moduli);
  level.group_ = std::move(group);
  level.index_ = index;
  level.chain_index_ = index;
  level.provenance_ = Provenance::FiniteQuotient;
  level.realization_ = Realization::Torus;
  level.moduli_ = std::move(moduli);
  return level;
}

SoficLevel SoficLevel::folner(GroupPtr group, FolnerBox box, std::size_t index) {
  if (!group || group->kind() != GroupKind::FreeAbelian) {
    throw UnsupportedGroup("Folner boxes are implemented for Z^d only");
  }
  if (box.sides.size() != static_cast<std::size_t>(group->rank())) {
    throw ValidationError("Folner box dimension must match the group rank");
  }
  SoficLevel level;
  level.degree_ = checked_degree(box.sides);
  level.group_ = std::move(group);
  level.index_ = index;
  level.provenance_ = Provenance::FolnerSet;
  level.realization_ = Realization::Folner;
  level.box_ = std::move(box);
  return level;
}

SoficLevel SoficLevel::from_generators(GroupPtr group,
                                       std::vector<Permutation> generators,
                                       Provenance provenance,
                                       std::size_t index,
                                       std::size_t chain_index) {
  if (!group) throw ValidationError("level without a group");
  if (provenance == Provenance::FolnerSet) {
    throw ValidationError("Folner levels are built from boxes, not tables");
  }
  if (generators.size() != group->generator_count()) {
    throw ValidationError("expected " + std::to_string(group->generator_count()) +
                          " generator permutations, got " +
                          std::to_string(generators.size()));
  }
  std::size_t degree = 0;
  for (const auto& p : generators) {
    if (p.empty()) continue;
    if (p.size() > kMaxDegree) throw BudgetExceeded("level degree overflow");
    if (degree == 0) degree = p.size();
    if (p.size() != degree) {
      throw ValidationError("generator permutations have different degrees");
    }
    if (!is_bijection(p)) {
      throw ValidationError("generator table entry is not a bijection");
    }
  }
  if (degree == 0) throw ValidationError("no generator permutation assigned");
  if (provenance == Provenance::FiniteQuotient) {
    check_homomorphism(*group, generators, 0);
  }
  SoficLevel level;
  level.group_ = std::move(group);
  level.degree_ = degree;
  level.index_ = index;
  level.chain_index_ = chain_index;
  level.provenance_ = provenance;
  level.realization_ = Realization::Generators;
  level.generator_inverses_.reserve(generators.size());
  for (const auto& p : generators) {
    level.generator_inverses_.push_back(p.empty() ? Permutation{} : invert(p));
  }
  level.generators_ = std::move(generators);
  return level;
}

SoficLevel SoficLevel::regular(GroupPtr group, std::size_t index) {
  if (!group || group->kind() != GroupKind::Finite) {
    throw UnsupportedGroup("regular levels need a finite group");
  }
  const auto k = static_cast<std::size_t>(group->rank());
  std::vector<Permutation> gens;
  for (std::size_t a = 1; a < k; ++a) {
    Permutation p(k);
    for (std::size_t x = 0; x < k; ++x) {
      p[x] = static_cast<std::uint32_t>(group->table()[a][x]);
    }
    gens.push_back(std::move(p));
  }
  if (k == 1) {
    // Trivial group: no generators, degree 1.
    SoficLevel level;
    level.group_ = std::move(group);
    level.degree_ = 1;
    level.index_ = index;
    level.provenance_ = Provenance::FiniteQuotient;
    level.realization_ = Realization::Generators;
    return level;
  }
  return from_generators(std::move(group), std::move(gens),
                         Provenance::FiniteQuotient, index, index);
}

std::string SoficLevel::describe() const {
  std::string out = "level " + std::to_string(index_) + " (" +
                    to_string(provenance_) + ", degree " +
                    std::to_string(degree_);
  if (realization_ == Realization::Torus) {
    out += ", moduli";
    for (auto m : moduli_) out += " " + std::to_string(m);
  } else if (box_) {
    out += ", box";
    for (auto s : box_->sides) out += " " + std::to_string(s);
  }
  return out + ")";
}

Permutation SoficLevel::permutation(const GroupElement& g) const {
  if (!same_group(g.group(), group_)) {
    throw GroupMismatch("element of " + g.group()->describe() +
                        " evaluated at a level of " + group_->describe());
  }
  return permutation(g.word());
}

Permutation SoficLevel::permutation(const Word& w) const {
  if (!group_->is_normal_form(w)) {
    throw NotExpressible("word is not a normal form of " + group_->describe());
  }
  switch (realization_) {
    case Realization::Torus: return torus_permutation(w);
    case Realization::Folner: return folner_permutation(w);
    case Realization::Generators: return generator_permutation(w);
  }
  return {};
}

Permutation SoficLevel::torus_permutation(const Word& w) const {
  const std::size_t d = moduli_.size();
  std::vector<std::int64_t> shift(d);
  for (std::size_t j = 0; j < d; ++j) {
    shift[j] = ((w[j] % moduli_[j]) + moduli_[j]) % moduli_[j];
  }
  Permutation p(degree_);
  std::vector<std::int64_t> coord(d, 0);
  for (std::size_t k = 0; k < degree_; ++k) {
    std::size_t target = 0;
    for (std::size_t j = 0; j < d; ++j) {
      target = target * static_cast<std::size_t>(moduli_[j]) +
               static_cast<std::size_t>((coord[j] + shift[j]) % moduli_[j]);
    }
    p[k] = static_cast<std::uint32_t>(target);
    for (std::size_t j = d; j-- > 0;) {
      if (++coord[j] < moduli_[j]) break;
      coord[j] = 0;
    }
  }
  return p;
}

Permutation SoficLevel::folner_permutation(const Word& w) const {
  const FolnerBox& box = *box_;
  const std::size_t d = box.dimension();
  Permutation p(degree_, 0);
  std::vector<std::uint32_t> leaving;   // F \ g^{-1}F, lexicographic
  std::vector<std::uint32_t> arriving;  // F \ gF, lexicographic
  std::vector<std::int64_t> q(d);
  for (std::size_t k = 0; k < degree_; ++k) {
    const auto x = box.point(k);
    for (std::size_t j = 0; j < d; ++j) q[j] = x[j] + w[j];
    if (auto t = box.index_of(q)) {
      p[k] = static_cast<std::uint32_t>(*t);
    } else {
      leaving.push_back(static_cast<std::uint32_t>(k));
    }
    for (std::size_t j = 0; j < d; ++j) q[j] = x[j] - w[j];
    if (!box.index_of(q)) arriving.push_back(static_cast<std::uint32_t>(k));
  }
  // Order-preserving completion bijection.
  for (std::size_t i = 0; i < leaving.size(); ++i) p[leaving[i]] = arriving[i];
  return p;
}

Permutation SoficLevel::generator_permutation(const Word& w) const {
  std::vector<std::size_t> used;
  used_generators(*group_, w, 0, used);
  for (auto g : used) {
    if (generators_[g].empty()) {
      throw NotExpressible("generator " + group_->generators()[g] +
                           " has no permutation at " + describe());
    }
  }
  Permutation p(degree_);
  for (std::size_t k = 0; k < degree_; ++k) {
    p[k] = apply_word(*group_, w, generators_, generator_inverses_, 0,
                      static_cast<std::uint32_t>(k));
  }
  return p;
}

DefectReport defect_statistics(
    const SoficLevel& level,
    const std::vector<std::pair<GroupElement, GroupElement>>& pairs) {
  DefectReport report;
  report.level_index = level.index();
  report.degree = level.degree();
  const double d = static_cast<double>(level.degree());
  for (const auto& [g, h] : pairs) {
    const auto pg = level.permutation(g);
    const auto ph = level.permutation(h);
    const auto pgh = level.permutation(mul(g, h));
    std::size_t agree = 0, differ = 0;
    for (std::size_t k = 0; k < level.degree(); ++k) {
      agree += pg[ph[k]] == pgh[k];
      differ += pg[k] != ph[k];
    }
    PairDefect row{g, h, static_cast<double>(agree) / d, std::nullopt};
    if (!(g == h)) row.separation_fraction = static_cast<double>(differ) / d;
    report.pairs.push_back(std::move(row));
  }
  return report;
}

namespace {

Permutation random_permutation(SplitMix64& rng, std::size_t degree) {
  Permutation p = identity_permutation(degree);
  for (std::size_t i = degree; i > 1; --i) {
    std::swap(p[i - 1], p[rng.below(i)]);
  }
  return p;
}

Permutation random_cycle(SplitMix64& rng, std::size_t degree) {
  const Permutation order = random_permutation(rng, degree);
  Permutation p(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    p[order[i]] = order[(i + 1) % degree];
  }
  return p;
}

void require_increasing(const std::vector<SoficLevel>& levels) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].degree() <= levels[i - 1].degree()) {
      throw ValidationError("level degrees must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<SoficLevel> quotient_chain(const GroupPtr& group,
                                       const QuotientSchedule& schedule) {
  if (!group) throw ValidationError("quotient chain without a group");
  std::vector<SoficLevel> levels;
  switch (group->kind()) {
    case GroupKind::FreeAbelian:
      if (schedule.catalog == FreeCatalog::UserTables) {
        for (std::size_t i = 0; i < schedule.tables.size(); ++i) {
          levels.push_back(SoficLevel::from_generators(
              group, schedule.tables[i], Provenance::FiniteQuotient, i, i));
        }
      } else {
        if (schedule.sizes.empty()) throw ValidationError("empty quotient schedule");
        for (std::size_t i = 0; i < schedule.sizes.size(); ++i) {
          levels.push_back(SoficLevel::torus_quotient(
              group,
              std::vector<std::int64_t>(static_cast<std::size_t>(group->rank()),
                                        schedule.sizes[i]),
              i));
        }
      }
      break;
    case GroupKind::Free: {
      const auto r = group->generator_count();
      if (schedule.catalog == FreeCatalog::UserTables) {
        for (std::size_t i = 0; i < schedule.tables.size(); ++i) {
          levels.push_back(SoficLevel::from_generators(
              group, schedule.tables[i], Provenance::FiniteQuotient, i, i));
        }
        break;
      }
      if (schedule.sizes.empty()) throw ValidationError("empty quotient schedule");
      for (std::size_t i = 0; i < schedule.sizes.size(); ++i) {
        if (schedule.sizes[i] < 1) throw ValidationError("degrees must be >= 1");
        const auto d = static_cast<std::size_t>(schedule.sizes[i]);
        if (d > kMaxDegree) throw BudgetExceeded("level degree overflow");
        std::vector<Permutation> gens;
        if (schedule.catalog == FreeCatalog::CyclicCommuting) {
          for (std::size_t j = 0; j < r; ++j) {
            Permutation p(d);
            for (std::size_t k = 0; k < d; ++k) {
              p[k] = static_cast<std::uint32_t>((k + j + 1) % d);
            }
            gens.push_back(std::move(p));
          }
        } else {
          SplitMix64 rng(schedule.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
          gens.push_back(random_cycle(rng, d));
          for (std::size_t j = 1; j < r; ++j) gens.push_back(random_permutation(rng, d));
        }
        levels.push_back(SoficLevel::from_generators(
            group, std::move(gens), Provenance::FiniteQuotient, i, i));
      }
      break;
    }
    case GroupKind::Finite:
      levels.push_back(SoficLevel::regular(group, 0));
      break;
    case GroupKind::DirectProduct:
      if (schedule.catalog == FreeCatalog::UserTables) {
        for (std::size_t i = 0; i < schedule.tables.size(); ++i) {
          levels.push_back(SoficLevel::from_generators(
              group, schedule.tables[i], Provenance::FiniteQuotient, i, i));
        }
        break;
      }
      throw UnsupportedGroup(
          "quotient chains of direct products require explicit user tables");
  }
  require_increasing(levels);
  return levels;
}

std::vector<SoficLevel> folner_levels(const GroupPtr& group,
                                      const std::vector<std::int64_t>& sides) {
  if (!group || group->kind() != GroupKind::FreeAbelian) {
    throw UnsupportedGroup("Folner levels are implemented for Z^d only");
  }
  std::vector<SoficLevel> levels;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    levels.push_back(SoficLevel::folner(
        group,
        FolnerBox{std::vector<std::int64_t>(static_cast<std::size_t>(group->rank()),
                                            sides[i])},
        i));
  }
  require_increasing(levels);
  return levels;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("empty range");
  // Reject the low residue class so that r % bound is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

}  // namespace soficrank
