#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "soficrank/errors.hpp"
#include "soficrank/parse.hpp"
#include "soficrank/sofic_level.hpp"
#include "soficrank/sofic_rep.hpp"

using namespace soficrank;

namespace {

// Dense sigma_i(f), built straight from the definition P(s)[s(x), x] = 1.
std::vector<std::vector<long long>> dense_representation(const SoficLevel& level,
                                                         const GroupRingMatrix& f) {
  const std::size_t d = level.degree();
  std::vector<std::vector<long long>> a(f.rows() * d,
                                        std::vector<long long>(f.cols() * d, 0));
  for (std::size_t j = 0; j < f.rows(); ++j) {
    for (std::size_t k = 0; k < f.cols(); ++k) {
      for (const auto& [w, c] : f(j, k).terms()) {
        const auto p = level.permutation(w);
        for (std::size_t x = 0; x < d; ++x) {
          a[j * d + p[x]][k * d + x] += static_cast<long long>(c);
        }
      }
    }
  }
  return a;
}

}  // namespace

TEST(SoficLevel, CyclicQuotientGeneratorIsAFullCycle) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {4}, 0);
  EXPECT_EQ(level.permutation(GroupElement::generator(z, 0)), (Permutation{1, 2, 3, 0}));
  EXPECT_EQ(level.permutation(GroupElement::identity(z)), identity_permutation(4));
}

TEST(SoficLevel, TorusCoordinatesCommute) {
  auto z2 = GroupSpec::free_abelian(2);
  const auto level = SoficLevel::torus_quotient(z2, {3, 3}, 0);
  EXPECT_EQ(level.degree(), 9u);
  const auto x = level.permutation(GroupElement::generator(z2, 0));
  const auto y = level.permutation(GroupElement::generator(z2, 1));
  EXPECT_EQ(compose(x, y), compose(y, x));
  EXPECT_EQ(fixed_points(x), 0u);
}

TEST(SoficLevel, FolnerTranslationOnBox) {
  auto z2 = GroupSpec::free_abelian(2);
  const auto level = SoficLevel::folner(z2, FolnerBox{{3, 3}}, 0);
  const auto p = level.permutation(GroupElement(z2, {1, 0}));
  EXPECT_TRUE(is_bijection(p));
  const FolnerBox box{{3, 3}};
  std::size_t translated = 0;
  for (std::size_t k = 0; k < 9; ++k) {
    auto q = box.point(k);
    q[0] += 1;
    if (auto t = box.index_of(q); t && p[k] == *t) ++translated;
  }
  EXPECT_EQ(translated, 6u);
}

TEST(SoficLevel, FolnerDefectObeysBoundaryBound) {
  auto z = GroupSpec::free_abelian(1);
  for (std::int64_t N : {8, 16, 33}) {
    const auto level = SoficLevel::folner(z, FolnerBox{{N}}, 0);
    for (std::int64_t g = -3; g <= 3; ++g) {
      for (std::int64_t h = -3; h <= 3; ++h) {
        const GroupElement G(z, {g});
        const GroupElement H(z, {h});
        const auto report = defect_statistics(level, {{G, H}});
        const double bound = static_cast<double>(std::abs(g) + std::abs(h) +
                                                 std::abs(g + h)) / static_cast<double>(N);
        EXPECT_LE(1.0 - report.pairs[0].multiplicative_fraction, bound + 1e-12)
            << "N=" << N << " g=" << g << " h=" << h;
      }
    }
  }
}

TEST(SoficLevel, FolnerIntervalCompletionMakesUnitShiftsMultiplicative) {
  // With the order-preserving completion, sigma(1) and sigma(2) on [0,N) are
  // the full cycle and its square, so the pair (1,1) has no defect.
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::folner(z, FolnerBox{{10}}, 0);
  const GroupElement one(z, {1});
  const auto report = defect_statistics(level, {{one, one}});
  EXPECT_DOUBLE_EQ(report.pairs[0].multiplicative_fraction, 1.0);
  // On an interval every completion is a power of the full cycle. A square
  // box sees the boundary through the diagonal shift.
  const auto r2 = defect_statistics(level, {{GroupElement(z, {2}), GroupElement(z, {-1})}});
  EXPECT_DOUBLE_EQ(r2.pairs[0].multiplicative_fraction, 1.0);
  auto z2 = GroupSpec::free_abelian(2);
  const auto square = SoficLevel::folner(z2, FolnerBox{{6, 6}}, 0);
  const auto r3 =
      defect_statistics(square, {{GroupElement(z2, {1, 0}), GroupElement(z2, {0, 1})}});
  EXPECT_LT(r3.pairs[0].multiplicative_fraction, 1.0);
  EXPECT_GE(r3.pairs[0].multiplicative_fraction, 1.0 - 11.0 / 36.0);
}

TEST(SoficLevel, QuotientLevelsAreExact) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule schedule;
  schedule.sizes = {5, 16, 64};
  const auto levels = quotient_chain(f2, schedule);
  ASSERT_EQ(levels.size(), 3u);
  const auto a = GroupElement::generator(f2, 0);
  const auto b = GroupElement::generator(f2, 1);
  for (const auto& level : levels) {
    EXPECT_TRUE(level.exact());
    const auto report = defect_statistics(level, {{a, b}, {a * b, b.inverse()}, {a, a}});
    for (const auto& p : report.pairs) EXPECT_DOUBLE_EQ(p.multiplicative_fraction, 1.0);
    EXPECT_TRUE(report.pairs[0].separation_fraction.has_value());
    EXPECT_FALSE(report.pairs[2].separation_fraction.has_value());
    // Transitive catalog: a single orbit.
    EXPECT_EQ(oracle::orbit_count(level.generator_permutations(), level.degree()), 1u);
  }
}

TEST(SoficLevel, QuotientChainDegrees) {
  auto z = GroupSpec::free_abelian(1);
  QuotientSchedule s;
  s.sizes = {4, 8, 16};
  const auto levels = quotient_chain(z, s);
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(levels[2].degree(), 16u);
  s.sizes = {8, 4};
  EXPECT_THROW(quotient_chain(z, s), ValidationError);
}

TEST(SoficLevel, UserTablesMustBeHomomorphisms) {
  auto z2 = GroupSpec::free_abelian(2);
  // Non-commuting permutations cannot come from Z^2.
  const Permutation x{1, 0, 2};
  const Permutation y{0, 2, 1};
  EXPECT_THROW(SoficLevel::from_generators(z2, {x, y}, Provenance::FiniteQuotient, 0),
               ValidationError);
  // Free groups accept anything.
  auto f2 = GroupSpec::free(2);
  const auto level =
      SoficLevel::from_generators(f2, {{1, 2, 3, 4, 0}, {0, 2, 1, 4, 3}},
                                  Provenance::FiniteQuotient, 0);
  EXPECT_EQ(level.degree(), 5u);
}

TEST(SoficLevel, UnassignedGeneratorIsNotExpressible) {
  auto f2 = GroupSpec::free(2);
  const auto level = SoficLevel::from_generators(f2, {{1, 2, 0}, {}},
                                                 Provenance::ExplicitTable, 0);
  EXPECT_NO_THROW(level.permutation(GroupElement::generator(f2, 0)));
  EXPECT_THROW(level.permutation(GroupElement::generator(f2, 1)), NotExpressible);
}

TEST(SoficLevel, PermutationsAreBijectionsOnRandomWords) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {97};
  const auto level = quotient_chain(f2, s)[0];
  SplitMix64 rng(9);
  for (int t = 0; t < 50; ++t) {
    Word w = f2->identity();
    for (int len = 0; len < 7; ++len) {
      const auto g = f2->generator(rng.below(2));
      w = f2->multiply(w, rng.below(2) ? g : f2->inverse(g));
    }
    EXPECT_TRUE(is_bijection(level.permutation(w)));
  }
}

TEST(SoficRep, ShiftMatrix) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {4}, 0);
  const auto a = represent(level, GroupRingMatrix::scalar(parse_element(z, "x - 1")));
  for (std::size_t r = 0; r < 4; ++r) {
    long long sum = 0;
    for (std::size_t c = 0; c < 4; ++c) sum += a.entries.at(r, c);
    EXPECT_EQ(sum, 0);
  }
  EXPECT_EQ(a.entries.at(1, 0), 1);  // P[s(x), x] with s(0) = 1
  EXPECT_NEAR(normalized_hs_norm(a), std::sqrt(2.0), 1e-15);
  const auto g = gram(a);
  EXPECT_EQ(g.entries, represent(level, GroupRingMatrix::scalar(
                                            parse_element(z, "2 - x - x^-1"))).entries);
}

TEST(SoficRep, MatchesDefinitionOnRectangularMatrices) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {7};
  const auto level = quotient_chain(f2, s)[0];
  const auto f = GroupRingMatrix::from_rows(
      f2, {{parse_element(f2, "a - 1"), parse_element(f2, "2b + a*b^-1")},
           {parse_element(f2, "3"), parse_element(f2, "0")},
           {parse_element(f2, "b^2 - a"), parse_element(f2, "-a^-1")}});
  const auto a = represent(level, f);
  const auto oracle_a = dense_representation(level, f);
  for (std::size_t r = 0; r < oracle_a.size(); ++r) {
    for (std::size_t c = 0; c < oracle_a[r].size(); ++c) {
      EXPECT_EQ(a.entries.at(r, c), oracle_a[r][c]);
    }
  }
}

TEST(SoficRep, HomomorphismAndStarAtExactLevels) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {11};
  const auto level = quotient_chain(f2, s)[0];
  const auto f = GroupRingMatrix::from_rows(
      f2, {{parse_element(f2, "a - b"), parse_element(f2, "1 + a*b")}});
  const auto h = GroupRingMatrix::from_rows(
      f2, {{parse_element(f2, "b^-1")}, {parse_element(f2, "a - 2")}});
  EXPECT_EQ(represent(level, f * h).entries,
            multiply(represent(level, f).entries, represent(level, h).entries));
  EXPECT_EQ(represent(level, f.star()).entries, represent(level, f).entries.transpose());
}

TEST(SoficRep, NormsAndExport) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {5}, 0);
  EXPECT_DOUBLE_EQ(normalized_hs_norm(represent(level, GroupRingMatrix::identity(z, 1))), 1.0);
  EXPECT_DOUBLE_EQ(normalized_hs_norm(represent(level, GroupRingMatrix(z, 1, 1))), 0.0);
  const auto p = represent(level, GroupRingMatrix::scalar(parse_element(z, "x")));
  EXPECT_EQ(gram(p).entries, SparseIntMatrix::identity(5));
  std::ostringstream os;
  export_triplets(os, p);
  EXPECT_EQ(os.str().substr(0, 14), "% 5 5 5\n0 4 1\n");
}
