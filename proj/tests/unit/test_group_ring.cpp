#include <gtest/gtest.h>

#include "oracles.hpp"
#include "soficrank/group_ring.hpp"
#include "soficrank/parse.hpp"
#include "soficrank/sofic_level.hpp"

using namespace soficrank;

namespace {

GroupRingElement random_element(const GroupPtr& g, SplitMix64& rng) {
  GroupRingElement x(g);
  for (int t = 0; t < 4; ++t) {
    Word w = g->identity();
    for (int len = 0; len < 3; ++len) {
      const auto s = g->generator(rng.below(g->generator_count()));
      w = g->multiply(w, rng.below(2) ? s : g->inverse(s));
    }
    x.add_term(w, Integer(static_cast<long long>(rng.below(7)) - 3));
  }
  return x;
}

}  // namespace

TEST(GroupRing, ConvolutionIsAssociativeAndDistributive) {
  auto f2 = GroupSpec::free(2);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_element(f2, rng);
    const auto b = random_element(f2, rng);
    const auto c = random_element(f2, rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(GroupRing, StarIsAnAntiInvolution) {
  auto f2 = GroupSpec::free(2);
  SplitMix64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_element(f2, rng);
    const auto b = random_element(f2, rng);
    EXPECT_EQ(a.star().star(), a);
    EXPECT_EQ((a * b).star(), b.star() * a.star());
  }
}

TEST(GroupRing, ConvolutionOnZ) {
  auto z = GroupSpec::free_abelian(1);
  const auto f = parse_element(z, "x - 1");
  // (x - 1)*(x - 1) = x^2 - 2x + 1
  EXPECT_EQ(f * f, parse_element(z, "x^2 - 2x + 1"));
  EXPECT_EQ(f.star() * f, parse_element(z, "2 - x - x^-1"));
}

TEST(GroupRing, TraceMomentsOfXPlusXInverse) {
  auto z = GroupSpec::free_abelian(1);
  const auto f = GroupRingMatrix::scalar(parse_element(z, "x + x^-1"));
  for (std::size_t k = 1; k <= 6; ++k) {
    // (f*f)^k = (x + x^-1)^(2k)
    EXPECT_EQ(trace_moment(f, k).convert_to<double>(), oracle::central_binomial(k))
        << "k=" << k;
  }
}

TEST(GroupRing, TraceMomentOfAPlusBOverF2) {
  auto f2 = GroupSpec::free(2);
  const auto f = GroupRingMatrix::scalar(parse_element(f2, "a + b"));
  EXPECT_EQ(trace_moment(f, 1), Integer(2));
  // (2 + a^-1 b + b^-1 a)^2 has e-coefficient 4 + 2 = 6.
  EXPECT_EQ(trace_moment(f, 2), Integer(6));
}

TEST(GroupRing, IdentityMomentIsRank) {
  auto f2 = GroupSpec::free(2);
  const auto id = GroupRingMatrix::identity(f2, 3);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(trace_moment(id, k), Integer(3));
}

TEST(GroupRing, MatrixStarAndProduct) {
  auto z = GroupSpec::free_abelian(1);
  const auto f = GroupRingMatrix::from_rows(
      z, {{parse_element(z, "x - 1"), parse_element(z, "2")}});
  const auto g = f.star() * f;
  EXPECT_EQ(g.rows(), 2u);
  EXPECT_EQ(g.cols(), 2u);
  EXPECT_EQ(g(0, 1), parse_element(z, "2x^-1 - 2"));
  EXPECT_EQ(g(1, 0), g(0, 1).star());
  EXPECT_EQ(trace_moment(f, 1), Integer(6));  // |x - 1|^2 + |2|^2
}

TEST(GroupRing, PresentationRelatorMatrix) {
  auto f2 = GroupSpec::free(2);
  ModulePresentation pres(f2, 1,
                          {{parse_element(f2, "a - 1")}, {parse_element(f2, "b - 1")}});
  const auto m = pres.relator_matrix(2);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 1u);
  EXPECT_EQ(m(1, 0), parse_element(f2, "b - 1"));
  EXPECT_EQ(pres.relator_matrix(0).rows(), 0u);
  EXPECT_THROW(pres.relator_matrix(3), ValidationError);
  EXPECT_THROW(ModulePresentation(f2, 2, {{parse_element(f2, "a")}}), ValidationError);
}
