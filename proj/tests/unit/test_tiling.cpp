#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "soficrank/errors.hpp"
#include "soficrank/tiling.hpp"

using namespace soficrank;

TEST(QuasiTile, ExactSquareTiling) {
  const auto t = quasi_tile(FolnerBox{{100, 100}}, {FolnerBox{{10, 10}}}, 0.1);
  EXPECT_EQ(t.tiles.size(), 100u);
  EXPECT_EQ(t.coverage, 1.0);
  EXPECT_FALSE(t.under_covered);
  EXPECT_TRUE(verify_tiling(t).all());
}

TEST(QuasiTile, SingleTileInOneDimension) {
  const auto t = quasi_tile(FolnerBox{{10}}, {FolnerBox{{10}}}, 0.2);
  ASSERT_EQ(t.tiles.size(), 1u);
  EXPECT_EQ(t.tiles[0].cells.size(), 10u);
  EXPECT_EQ(t.coverage, 1.0);
}

TEST(QuasiTile, RaggedRegion) {
  const auto t = quasi_tile(FolnerBox{{101, 101}}, {FolnerBox{{10, 10}}, FolnerBox{{3, 3}}}, 0.1);
  EXPECT_GE(t.coverage, 0.9);
  const auto check = verify_tiling(t);
  EXPECT_TRUE(check.all());
  EXPECT_EQ(check.union_size, t.covered);
}

TEST(QuasiTile, VerifierCatchesBrokenTilings) {
  auto t = quasi_tile(FolnerBox{{20}}, {FolnerBox{{5}}}, 0.1);
  ASSERT_TRUE(verify_tiling(t).all());
  auto overlap = t;
  overlap.tiles[1].center = overlap.tiles[0].center;
  EXPECT_FALSE(verify_tiling(overlap).disjoint);
  auto outside = t;
  outside.tiles.back().center = {18};
  EXPECT_FALSE(verify_tiling(outside).inside);
  auto thin = t;
  thin.tiles[0].cells = {0};
  EXPECT_FALSE(verify_tiling(thin).full);
  auto sparse = t;
  sparse.tiles.resize(2);
  EXPECT_FALSE(verify_tiling(sparse).covering);
}

TEST(QuasiTile, Preconditions) {
  EXPECT_THROW(quasi_tile(FolnerBox{{10}}, {}, 0.1), ValidationError);
  EXPECT_THROW(quasi_tile(FolnerBox{{10}}, {FolnerBox{{2}}}, 0.0), ValidationError);
  EXPECT_THROW(quasi_tile(FolnerBox{{10}}, {FolnerBox{{2, 2}}}, 0.1), ValidationError);
  EXPECT_THROW(quasi_tile(FolnerBox{{0}}, {FolnerBox{{2}}}, 0.1), ValidationError);
}

TEST(QuasiTile, RandomRegionsSatisfyTheInequalities) {
  SplitMix64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::int64_t a = 5 + static_cast<std::int64_t>(rng.below(40));
    const std::int64_t b = 5 + static_cast<std::int64_t>(rng.below(40));
    const std::int64_t s = 2 + static_cast<std::int64_t>(rng.below(6));
    const double eta = 0.05 + 0.3 * rng.uniform();
    const auto tiling = quasi_tile(FolnerBox{{a, b}}, {FolnerBox{{s, s}}, FolnerBox{{1, 1}}}, eta);
    const auto check = verify_tiling(tiling);
    EXPECT_TRUE(check.disjoint && check.inside && check.full);
    // The 1x1 shape fills every remaining hole.
    EXPECT_EQ(tiling.coverage, 1.0);
  }
}

TEST(QuasiTile, TranslateDifference) {
  const FolnerBox F{{4, 3}};
  EXPECT_EQ(box_translate_difference(F, {0, 0}), 0u);
  EXPECT_EQ(box_translate_difference(F, {1, 0}), 6u);
  EXPECT_EQ(box_translate_difference(F, {-1, 1}), 2u * (12u - 6u));
  EXPECT_EQ(box_translate_difference(F, {5, 0}), 24u);
  // Enumeration oracle.
  for (std::int64_t dx = -3; dx <= 3; ++dx) {
    for (std::int64_t dy = -3; dy <= 3; ++dy) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < F.size(); ++i) {
        auto p = F.point(i);
        p[0] += dx;
        p[1] += dy;
        count += !F.index_of(p).has_value();
      }
      EXPECT_EQ(box_translate_difference(F, {dx, dy}), 2 * count);
    }
  }
}

TEST(QuasiTile, CsvAndRender) {
  const auto t = quasi_tile(FolnerBox{{2, 4}}, {FolnerBox{{2, 2}}}, 0.1);
  std::ostringstream os;
  write_tiling_csv(os, t);
  EXPECT_EQ(os.str(), "tile,shape,cells,center_0,center_1\n0,0,4,0,0\n1,0,4,0,2\n");
  EXPECT_EQ(render_tiling(t), "0011\n0011\n");
  const auto gap = quasi_tile(FolnerBox{{5}}, {FolnerBox{{2}}}, 0.1);
  EXPECT_EQ(render_tiling(gap), "0011.\n");
  EXPECT_THROW(render_tiling(quasi_tile(FolnerBox{{2, 2, 2}}, {FolnerBox{{1, 1, 1}}}, 0.1)),
               ValidationError);
}

TEST(Orbit, DistanceIsAPseudometric) {
  const FolnerBox F{{3, 3}};
  const auto sample = random_configurations({-2, -2}, FolnerBox{{3, 3}}, 2, 30, 5);
  for (double p : {1.0, 2.0, kInfinity}) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      EXPECT_EQ(orbit_distance(MetricKind::Delta, F, p, sample[i], sample[i]), 0.0);
      for (std::size_t j = 0; j + 1 < sample.size(); ++j) {
        const double ij = orbit_distance(MetricKind::Delta, F, p, sample[i], sample[j]);
        EXPECT_DOUBLE_EQ(ij, orbit_distance(MetricKind::Delta, F, p, sample[j], sample[i]));
        EXPECT_LE(ij, orbit_distance(MetricKind::Delta, F, p, sample[i], sample[j + 1]) +
                          orbit_distance(MetricKind::Delta, F, p, sample[j + 1], sample[j]) +
                          1e-12);
      }
    }
  }
}

TEST(Orbit, ReadsReflectedSites) {
  // (gx)(e) = x(-g): F = {0, 1} reads x(0) and x(-1).
  TorusConfiguration x{{-1}, FolnerBox{{2}}, 1, {0.25, 0.0}};
  TorusConfiguration y{{-1}, FolnerBox{{2}}, 1, {0.0, 0.0}};
  EXPECT_DOUBLE_EQ(orbit_distance(MetricKind::Delta, FolnerBox{{1}}, 1.0, x, y), 0.0);
  EXPECT_DOUBLE_EQ(orbit_distance(MetricKind::Delta, FolnerBox{{2}}, 1.0, x, y), 0.125);
  EXPECT_DOUBLE_EQ(orbit_distance(MetricKind::Delta, FolnerBox{{2}}, kInfinity, x, y), 0.25);
  EXPECT_THROW(x.at({3}), ValidationError);
}

TEST(Orbit, FullShiftExponentIsOne) {
  const std::size_t L = 4;
  const auto sample = lattice_configurations({-3}, FolnerBox{{4}}, 1, L);
  ASSERT_EQ(sample.size(), 256u);
  const auto rows = orbit_covering_estimate(sample, MetricKind::Theta,
                                            {FolnerBox{{2}}, FolnerBox{{4}}}, kInfinity, {0.2});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].upper, 16u);
  EXPECT_EQ(rows[1].upper, 256u);
  EXPECT_NEAR(rows[1].upper_exponent, std::log(4.0) / std::log(5.0), 1e-12);
  EXPECT_LE(rows[1].lower, rows[1].upper);
}

TEST(Orbit, FixedPointCoversWithOneBall) {
  std::vector<TorusConfiguration> sample(5, TorusConfiguration{{-3}, FolnerBox{{4}}, 1,
                                                               std::vector<double>(4, 0.5)});
  const auto rows =
      orbit_covering_estimate(sample, MetricKind::Delta, {FolnerBox{{4}}}, 2.0, {0.1, 0.01});
  for (const auto& r : rows) {
    EXPECT_EQ(r.upper, 1u);
    EXPECT_EQ(r.upper_exponent, 0.0);
  }
}

TEST(Orbit, PMonotone) {
  const auto sample = random_configurations({-4, -4}, FolnerBox{{5, 5}}, 1, 400, 17);
  const std::vector<FolnerBox> sets{FolnerBox{{2, 2}}, FolnerBox{{3, 3}}};
  const auto one = orbit_covering_estimate(sample, MetricKind::Delta, sets, 1.0, {0.2});
  const auto inf = orbit_covering_estimate(sample, MetricKind::Delta, sets, kInfinity, {0.2});
  for (std::size_t k = 0; k < one.size(); ++k) EXPECT_LE(one[k].upper, inf[k].upper);
}

TEST(Orbit, Preconditions) {
  EXPECT_THROW(orbit_covering_estimate({}, MetricKind::Delta, {FolnerBox{{1}}}, 1.0, {0.1}),
               ValidationError);
  const auto sample = random_configurations({0}, FolnerBox{{1}}, 1, 3, 1);
  EXPECT_THROW(orbit_covering_estimate(sample, MetricKind::Delta, {FolnerBox{{1}}}, 0.5, {0.1}),
               ValidationError);
  EXPECT_THROW(orbit_covering_estimate(sample, MetricKind::Delta, {FolnerBox{{1}}}, 1.0, {1.5}),
               ValidationError);
  EXPECT_THROW(lattice_configurations({0}, FolnerBox{{30}}, 1, 4), BudgetExceeded);
}
