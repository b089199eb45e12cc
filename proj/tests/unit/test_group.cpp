#include <gtest/gtest.h>

#include <vector>

#include "soficrank/errors.hpp"
#include "soficrank/group.hpp"
#include "soficrank/parse.hpp"
#include "soficrank/sofic_level.hpp"

using namespace soficrank;

namespace {

GroupPtr s3() {
  // Elements 0..5 as permutations of {0,1,2}; table by composition.
  const std::vector<std::vector<int>> perms{{0, 1, 2}, {1, 0, 2}, {0, 2, 1},
                                            {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      std::vector<int> c(3);
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      for (int r = 0; r < 6; ++r) {
        if (perms[r] == c) table[i][j] = r;
      }
    }
  }
  return GroupSpec::finite(table);
}

}  // namespace

TEST(Group, FreeAbelianMultiplication) {
  auto z2 = GroupSpec::free_abelian(2);
  GroupElement x(z2, {1, 0});
  GroupElement y(z2, {0, 1});
  EXPECT_EQ((x * y).word(), (Word{1, 1}));
  EXPECT_EQ((x * y).str(), "x*y");
  EXPECT_EQ((x * x.inverse()).word(), (Word{0, 0}));
  EXPECT_TRUE((x * x.inverse()).is_identity());
}

TEST(Group, FreeGroupReduction) {
  auto f2 = GroupSpec::free(2);
  const auto a = GroupElement::generator(f2, 0);
  const auto b = GroupElement::generator(f2, 1);
  EXPECT_EQ((a * b * b.inverse() * a.inverse()).word(), Word{});
  EXPECT_EQ((a * b).str(), "a*b");
  EXPECT_NE((a * b).word(), (b * a).word());
  EXPECT_EQ((a * b).inverse().word(), (b.inverse() * a.inverse()).word());
}

TEST(Group, InverseIsInvolutionAndIdentityIsNeutral) {
  auto f3 = GroupSpec::free(3);
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Word w = f3->identity();
    for (int len = 0; len < 8; ++len) {
      const auto g = f3->generator(rng.below(3));
      w = f3->multiply(w, rng.below(2) ? g : f3->inverse(g));
    }
    GroupElement g(f3, w);
    EXPECT_EQ(g.inverse().inverse(), g);
    EXPECT_EQ(GroupElement::identity(f3) * g, g);
    EXPECT_EQ(g * GroupElement::identity(f3), g);
  }
}

TEST(Group, AssociativityOnRandomWords) {
  auto f2 = GroupSpec::free(2);
  auto z3 = GroupSpec::free_abelian(3);
  SplitMix64 rng(11);
  for (const auto& grp : {f2, z3}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Word> w(3, grp->identity());
      for (auto& x : w) {
        for (int len = 0; len < 5; ++len) {
          const auto g = grp->generator(rng.below(grp->generator_count()));
          x = grp->multiply(x, rng.below(2) ? g : grp->inverse(g));
        }
      }
      EXPECT_EQ(grp->multiply(grp->multiply(w[0], w[1]), w[2]),
                grp->multiply(w[0], grp->multiply(w[1], w[2])));
    }
  }
}

TEST(Group, FiniteGroupFromTable) {
  auto g = s3();
  EXPECT_EQ(g->rank(), 6);
  for (int i = 0; i < 6; ++i) {
    Word w{i};
    EXPECT_TRUE(g->is_identity(g->multiply(w, g->inverse(w))));
  }
  // S3 is not abelian.
  EXPECT_NE(g->multiply(Word{1}, Word{2}), g->multiply(Word{2}, Word{1}));
}

TEST(Group, FiniteTableMustBeAGroup) {
  EXPECT_THROW(GroupSpec::finite({{0, 1}, {1, 1}}), ValidationError);  // no inverse
  EXPECT_THROW(GroupSpec::finite({{1, 0}, {0, 1}}), ValidationError);  // 0 not identity
}

TEST(Group, RankMustBePositive) {
  EXPECT_THROW(GroupSpec::free_abelian(0), ValidationError);
  EXPECT_THROW(GroupSpec::free(0), ValidationError);
}

TEST(Group, DirectProduct) {
  auto z = GroupSpec::free_abelian(1, {"t"});
  auto f2 = GroupSpec::free(2);
  auto p = GroupSpec::direct_product({z, f2});
  const auto t = GroupElement::generator(p, 0);
  const auto a = GroupElement::generator(p, 1);
  EXPECT_EQ(t * a, a * t);
  EXPECT_EQ((t * a * t).str(), "t^2*a");
  EXPECT_THROW(GroupSpec::direct_product({f2, f2}), ValidationError);  // label clash
}

TEST(Group, MixingGroupsIsAnError) {
  auto z = GroupSpec::free_abelian(1);
  auto f = GroupSpec::free(1);
  EXPECT_THROW(GroupElement::generator(z, 0) * GroupElement::generator(f, 0),
               GroupMismatch);
}

TEST(Group, NormalFormIsValidated) {
  auto f2 = GroupSpec::free(2);
  EXPECT_THROW(GroupElement(f2, Word{1, -1}), ValidationError);
  EXPECT_THROW(GroupElement(f2, Word{3}), ValidationError);
}

TEST(Parse, FormatRoundTrip) {
  auto f2 = GroupSpec::free(2);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Word w = f2->identity();
    for (int len = 0; len < 6; ++len) {
      const auto g = f2->generator(rng.below(2));
      w = f2->multiply(w, rng.below(2) ? g : f2->inverse(g));
    }
    const GroupElement g(f2, w);
    EXPECT_EQ(parse_group_element(f2, g.str()), g) << g.str();
  }
}

TEST(Parse, ElementSyntax) {
  auto z = GroupSpec::free_abelian(1);
  const auto f = parse_element(z, "x - 1");
  EXPECT_EQ(f.str(), "-1 + x");
  EXPECT_EQ(parse_element(z, "x^-1 + 2 - x").support_size(), 3u);
  EXPECT_EQ(parse_element(z, "(x+1)^2"), parse_element(z, "x^2 + 2x + 1"));
  EXPECT_TRUE(parse_element(z, "x - x").is_zero());
}

TEST(Parse, ErrorsCarryPosition) {
  auto z = GroupSpec::free_abelian(1);
  try {
    parse_element(z, "x - * 1");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
    EXPECT_NE(e.caret().find("    ^"), std::string::npos);
  }
  EXPECT_THROW(parse_element(z, "y"), ParseError);           // unknown generator
  EXPECT_THROW(parse_element(z, "(x + 1)^-1"), ParseError);  // not a unit
  EXPECT_THROW(parse_element(z, "x +"), ParseError);
}
