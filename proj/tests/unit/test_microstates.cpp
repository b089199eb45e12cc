#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "soficrank/covering.hpp"
#include "soficrank/errors.hpp"
#include "soficrank/mdim.hpp"
#include "soficrank/microstates.hpp"
#include "soficrank/parse.hpp"
#include "soficrank/spectral.hpp"

using namespace soficrank;

namespace {

ModulePresentation principal(const GroupPtr& g, const char* relator) {
  return ModulePresentation(g, 1, {{parse_element(g, relator)}});
}

ModulePresentation trivial_module(const GroupPtr& f) {
  std::vector<std::vector<GroupRingElement>> rel;
  for (std::size_t i = 0; i < f->generator_count(); ++i) {
    rel.push_back({GroupRingElement::monomial(GroupElement::generator(f, i)) -
                   GroupRingElement::one(f)});
  }
  return ModulePresentation(f, 1, rel);
}

std::vector<GroupElement> symmetric_window(const GroupPtr& g) {
  std::vector<GroupElement> w{GroupElement::identity(g)};
  for (std::size_t i = 0; i < g->generator_count(); ++i) {
    w.push_back(GroupElement::generator(g, i));
    w.push_back(GroupElement::generator(g, i).inverse());
  }
  return w;
}

}  // namespace

TEST(NearKernel, NoRelatorsIsFullSpace) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {6};
  const auto level = quotient_chain(f2, s)[0];
  NearKernelOptions o;
  const auto w = near_kernel(level, ModulePresentation::free_module(f2, 2), o);
  EXPECT_EQ(w.dimension, 12u);
  EXPECT_TRUE(w.warnings.empty());
}

TEST(NearKernel, CirculantConstants) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {8}, 0);
  NearKernelOptions o;
  o.relators = 1;
  o.delta = 0.1;
  const auto w = near_kernel(level, principal(z, "x - 1"), o);
  ASSERT_EQ(w.dimension, 1u);
  EXPECT_NEAR(w.spectrum[1], 2.0 - 2.0 * std::cos(std::numbers::pi / 4), 1e-12);
  // Basis vector is constant with unit norm.
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(w.basis(i, 0)), 1.0 / std::sqrt(8.0), 1e-12);
  EXPECT_TRUE(w.exact_mode);
}

TEST(NearKernel, FreeGroupOrbitConstants) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {40};
  const auto level = quotient_chain(f2, s)[0];
  NearKernelOptions o;
  o.relators = 2;
  o.delta = 1e-6;
  const auto w = near_kernel(level, trivial_module(f2), o);
  EXPECT_EQ(w.dimension, 1u);
  // Orthonormal basis, and every basis vector is below the threshold.
  const Eigen::MatrixXd gram = w.basis.transpose() * w.basis;
  EXPECT_NEAR((gram - Eigen::MatrixXd::Identity(1, 1)).norm(), 0.0, 1e-10);
}

TEST(NearKernel, DimensionMatchesCountingFunction) {
  auto z2 = GroupSpec::free_abelian(2);
  const auto level = SoficLevel::torus_quotient(z2, {5, 5}, 0);
  const auto pres = principal(z2, "x + y - 1");
  for (double delta : {0.01, 0.2, 0.9}) {
    NearKernelOptions o;
    o.relators = 1;
    o.delta = delta;
    o.want_basis = false;
    const auto w = near_kernel(level, pres, o);
    // Eigenvalues of the Gram strictly below delta are singular values
    // strictly below sqrt(delta).
    const auto profile = singular_profile(represent(level, pres.relator_matrix()));
    std::size_t count = 0;
    for (double v : profile.values) count += v * v < delta;
    EXPECT_EQ(w.dimension, count) << "delta=" << delta;
  }
}

TEST(NearKernel, DegenerateDeltaWarns) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {6}, 0);
  NearKernelOptions o;
  o.relators = 1;
  o.delta = 10.0;
  const auto w = near_kernel(level, principal(z, "x - 1"), o);
  EXPECT_EQ(w.dimension, 6u);
  EXPECT_EQ(w.warnings.size(), 1u);
  o.relators = 2;
  EXPECT_THROW(near_kernel(level, principal(z, "x - 1"), o), ValidationError);
  o.relators = 1;
  o.delta = 0.0;
  EXPECT_THROW(near_kernel(level, principal(z, "x - 1"), o), ValidationError);
}

TEST(NearKernel, ApproximateModeOnFolnerLevel) {
  auto z = GroupSpec::free_abelian(2);
  const auto level = SoficLevel::folner(z, FolnerBox{{6, 6}}, 0);
  NearKernelOptions o;
  o.relators = 1;
  o.delta = 0.5;
  o.relation_set = {GroupElement(z, {1, 0}), GroupElement(z, {0, 1})};
  o.power_bound = 1;
  const auto w = near_kernel(level, principal(z, "x - 1"), o);
  EXPECT_FALSE(w.exact_mode);
  EXPECT_GT(w.relation_constraints, 0u);
  EXPECT_DOUBLE_EQ(w.threshold, 0.5 / static_cast<double>(1 + w.relation_constraints));
  EXPECT_GE(w.dimension, 1u);
}

TEST(Microstate, ZeroVectorIsFixed) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {9};
  const auto level = quotient_chain(f2, s)[0];
  const std::vector<double> xi(9, 0.0);
  const auto ms = microstate_from_vector(level, xi, 1, symmetric_window(f2));
  const auto pres = trivial_module(f2);
  for (double delta : {1e-9, 0.1, 1.0}) {
    const auto r = map_membership(ms, level, PseudometricSpec{}, symmetric_window(f2), delta,
                                  pres, 2);
    EXPECT_TRUE(r.member);
    for (const auto& d : r.defects) EXPECT_EQ(d.defect, 0.0);
  }
}

TEST(Microstate, ConstantVectorOnCircle) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {4}, 0);
  const std::vector<double> xi(4, 0.25);
  const auto ms = microstate_from_vector(level, xi, 1, symmetric_window(z));
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t w = 0; w < 3; ++w) EXPECT_EQ(ms.value(x, 0, w), 0.25);
  }
  const auto r = map_membership(ms, level, PseudometricSpec{}, {GroupElement(z, {1})}, 1e-12,
                                principal(z, "x - 1"), 1);
  EXPECT_EQ(r.defects[0].defect, 0.0);
  EXPECT_EQ(r.smallness[0], 0.0);
  EXPECT_TRUE(r.member);
}

TEST(Microstate, ExactEquivarianceIsBitExact) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {31, 64};
  SplitMix64 rng(77);
  for (const auto& level : quotient_chain(f2, s)) {
    std::vector<double> xi(2 * level.degree());
    for (auto& v : xi) v = rng.uniform() * 3.0 - 1.0;
    const auto window = symmetric_window(f2);
    const auto ms = microstate_from_vector(level, xi, 2, window);
    for (double b : ms.base()) {
      EXPECT_GE(b, 0.0);
      EXPECT_LT(b, 1.0);
    }
    const auto r = map_membership(ms, level, PseudometricSpec{MetricKind::Theta, 2.0}, window,
                                  1e-12, ModulePresentation::free_module(f2, 2), 0);
    for (const auto& d : r.defects) EXPECT_EQ(d.defect, 0.0) << d.g.str();
    EXPECT_TRUE(r.member);
  }
}

TEST(Microstate, RelatorSmallnessIsTheShiftDifference) {
  auto z = GroupSpec::free_abelian(1);
  const std::int64_t N = 16;
  const auto level = SoficLevel::torus_quotient(z, {N}, 0);
  std::vector<double> xi(N);
  for (std::int64_t x = 0; x < N; ++x) xi[x] = 0.01 * static_cast<double>(x % 4);
  const auto ms = microstate_from_vector(level, xi, 1, symmetric_window(z));
  const auto r = map_membership(ms, level, PseudometricSpec{}, {}, 0.5,
                                principal(z, "x - 1"), 1);
  // <phi(x), x - e> = xi(x - 1) - xi(x); compute by hand.
  double acc = 0.0;
  for (std::int64_t x = 0; x < N; ++x) {
    const double v = xi[(x + N - 1) % N] - xi[x];
    const double t = std::min(std::abs(v), 1.0 - std::abs(v));
    acc += t * t;
  }
  EXPECT_NEAR(r.smallness[0], acc / N, 1e-15);
  EXPECT_EQ(r.small, acc / N < 0.25);
}

TEST(Microstate, FolnerDefectsCountTheBoundary) {
  auto z = GroupSpec::free_abelian(1);
  const std::int64_t N = 8;
  const auto level = SoficLevel::folner(z, FolnerBox{{N}}, 0);
  std::vector<double> xi(N);
  for (std::int64_t x = 0; x < N; ++x) xi[x] = 0.1 * static_cast<double>(x);
  const GroupElement g(z, {2});
  const auto ms = microstate_from_vector(level, xi, 1,
                                         {GroupElement::identity(z), g.inverse()});
  const auto r = map_membership(ms, level, PseudometricSpec{}, {g}, 0.5,
                                ModulePresentation::free_module(z, 1), 0);
  // Hand count: phi(sigma(g)x)(e) = xi(sigma(g)x), (g phi(x))(e) = xi(sigma(g^-1)^-1 x).
  const auto sg = level.permutation(g);
  const auto sgi_inv = invert(level.permutation(g.inverse()));
  double acc = 0.0;
  std::size_t mismatches = 0;
  for (std::int64_t x = 0; x < N; ++x) {
    const double t = circle_distance(xi[sg[x]], xi[sgi_inv[x]]);
    acc += t * t;
    mismatches += sg[x] != sgi_inv[x];
  }
  EXPECT_NEAR(r.defects[0].defect, std::sqrt(acc / N), 1e-15);
  // Only boundary points can disagree, and each by at most 1/2.
  EXPECT_LE(mismatches, 4u);
  EXPECT_LE(r.defects[0].defect, std::sqrt(static_cast<double>(mismatches) / N) * 0.5);
}

TEST(Microstate, WindowMustCoverTheChecks) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {4}, 0);
  const std::vector<double> xi(4, 0.0);
  const auto ms = microstate_from_vector(level, xi, 1, {GroupElement::identity(z)});
  EXPECT_THROW(map_membership(ms, level, PseudometricSpec{}, {GroupElement(z, {1})}, 0.1,
                              principal(z, "x - 1"), 0),
               ValidationError);
  EXPECT_THROW(map_membership(ms, level, PseudometricSpec{}, {}, 0.1, principal(z, "x - 1"), 1),
               ValidationError);
  EXPECT_THROW(microstate_from_vector(level, std::vector<double>(3), 1, {}), ValidationError);
}

TEST(Microstate, CsvExport) {
  auto z = GroupSpec::free_abelian(1);
  const auto level = SoficLevel::torus_quotient(z, {2}, 0);
  const std::vector<double> xi{0.5, 1.25};
  const auto ms = microstate_from_vector(level, xi, 1, {GroupElement::identity(z)});
  std::ostringstream os;
  write_microstates_csv(os, {ms});
  EXPECT_EQ(os.str(), "microstate,level,point,coordinate,value\n0,0,0,0,0.5\n0,0,1,0,0.25\n");
}

TEST(Covering, Examples) {
  const PseudometricSpec m{MetricKind::Delta, 2.0};
  EXPECT_EQ(covering_number_bruteforce({{0.3}}, m, 1, 0.1).upper, 1u);
  const auto close = covering_number_bruteforce({{0.3}, {0.35}}, m, 1, 0.1);
  EXPECT_EQ(close.lower, 1u);
  EXPECT_EQ(close.upper, 1u);
  std::vector<std::vector<double>> circle;
  for (int k = 0; k < 100; ++k) circle.push_back({k / 100.0});
  const auto c = covering_number_bruteforce(circle, m, 1, 0.1);
  EXPECT_LE(c.upper, 10u);
  EXPECT_LE(c.lower, c.upper);
  // Any eps-dense set of the circle sample has at least 1/(2 eps) points.
  EXPECT_GE(c.upper, 5u);
  std::vector<std::vector<double>> big(kCoveringBudget + 1, std::vector<double>{0.0});
  EXPECT_THROW(covering_number_bruteforce(big, m, 1, 0.1), BudgetExceeded);
}

TEST(Covering, GreedyUpperIsEpsDenseAndLowerIsSeparated) {
  SplitMix64 rng(4);
  std::vector<std::vector<double>> pts(300, std::vector<double>(3));
  for (auto& p : pts) for (auto& v : p) v = rng.uniform();
  const PseudometricSpec m{MetricKind::Theta, 1.0};
  const auto b = covering_number_bruteforce(pts, m, 1, 0.2);
  EXPECT_LE(b.lower, b.upper);
  EXPECT_GE(b.lower, 1u);
}

TEST(Covering, PMonotoneOnFixedSample) {
  SplitMix64 rng(8);
  std::vector<std::vector<double>> pts(400, std::vector<double>(4));
  for (auto& p : pts) for (auto& v : p) v = rng.uniform();
  for (double eps : {0.25, 0.125}) {
    std::size_t prev = 0;
    for (double p : {1.0, 2.0, kInfinity}) {
      const auto b = covering_number_bruteforce(pts, PseudometricSpec{MetricKind::Delta, p}, 1, eps);
      EXPECT_GE(b.upper, prev) << "p=" << p << " eps=" << eps;
      prev = b.upper;
    }
  }
}

TEST(Covering, ProductMetricIsAPseudometric) {
  SplitMix64 rng(12);
  for (double p : {1.0, 2.0, 3.5, kInfinity}) {
    for (auto kind : {MetricKind::Delta, MetricKind::Theta}) {
      const PseudometricSpec m{kind, p};
      for (int t = 0; t < 200; ++t) {
        std::vector<double> a(6), b(6), c(6);
        for (auto* v : {&a, &b, &c}) for (auto& x : *v) x = rng.uniform();
        const double ab = product_distance(m, 2, a, b);
        EXPECT_DOUBLE_EQ(ab, product_distance(m, 2, b, a));
        EXPECT_LE(ab, product_distance(m, 2, a, c) + product_distance(m, 2, c, b) + 1e-12);
      }
    }
  }
}

TEST(Covering, LatticeFastPathMatchesMaterializedSample) {
  for (double p : {1.0, 2.0, kInfinity}) {
    const PseudometricSpec m{MetricKind::Theta, p};
    const std::size_t L = 4, n = 1, d = 3;
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < 64; ++i) {
      pts.push_back({static_cast<double>(i / 16) / L, static_cast<double>((i / 4) % 4) / L,
                     static_cast<double>(i % 4) / L});
    }
    for (double eps : {0.2, 0.3}) {
      const auto brute = covering_number_bruteforce(pts, m, n, eps);
      const auto fast = lattice_covering(L, n, d, m, eps);
      EXPECT_EQ(fast.upper, brute.upper) << "p=" << p << " eps=" << eps;
      ASSERT_TRUE(fast.lower_computed);
      EXPECT_EQ(fast.lower, brute.lower);
    }
  }
}

TEST(Mdim, FreeModuleIntervalAndBruteForce) {
  auto z = GroupSpec::free_abelian(1);
  QuotientSchedule s;
  s.sizes = {4, 8};
  const auto levels = quotient_chain(z, s);
  for (std::size_t n : {1u, 2u}) {
    MdimOptions o;
    o.eps = {0.125};
    const auto r = mdim_estimate(levels, ModulePresentation::free_module(z, n), o);
    ASSERT_EQ(r.summary.size(), 1u);
    EXPECT_TRUE(r.summary[0].contains(static_cast<double>(n)));
    const auto& row = r.rows[0];
    ASSERT_EQ(row.degree, 4u);
    ASSERT_EQ(row.brute_status, "ok");
    EXPECT_NEAR(*row.brute_exponent, static_cast<double>(n), 0.2 * static_cast<double>(n));
    // 8^8 lattice points fit the brute-force cap, 8^16 do not.
    EXPECT_EQ(r.rows[1].brute_status == "ok", n == 1);
  }
}

TEST(Mdim, PrincipalModuleShrinks) {
  auto z = GroupSpec::free_abelian(1);
  QuotientSchedule s;
  s.sizes = {8, 16, 64};
  const auto levels = quotient_chain(z, s);
  MdimOptions o;
  o.eps = {0.125, 1e-6};
  o.delta = 1e-6;
  const auto r = mdim_estimate(levels, principal(z, "x - 1"), o);
  for (const auto& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.lower, 1.0 / static_cast<double>(row.degree));
    EXPECT_LE(row.lower, row.upper);
  }
  EXPECT_LT(r.summary.back().upper, 0.03);
  // Brute force at d = 8: W is the line of constants, a 1-dimensional sample.
  EXPECT_EQ(r.rows[0].brute_status, "ok");
  EXPECT_LE(*r.rows[0].brute_exponent, r.rows[0].upper + 0.25);
}

TEST(Mdim, FreeGroupPrincipalIsOne) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {32, 64};
  MdimOptions o;
  o.eps = {1e-3};
  const auto r = mdim_estimate(quotient_chain(f2, s), ModulePresentation::free_module(f2, 1), o);
  EXPECT_TRUE(r.summary[0].contains(1.0));
}

TEST(Mdim, CoveringSlopeTracksDimension) {
  auto z = GroupSpec::free_abelian(1);
  const std::vector<double> eps{0.125, 0.0625, 0.03125, 0.015625};
  // dim 1: constants under x - 1.
  {
    const auto level = SoficLevel::torus_quotient(z, {8}, 0);
    NearKernelOptions o;
    o.relators = 1;
    o.delta = 0.1;
    const auto fit = covering_slope(near_kernel(level, principal(z, "x - 1"), o), eps);
    EXPECT_NEAR(fit.slope, 1.0, 0.3);
  }
  // dim 2: x^2 - 1 on Z/8 has kernel spanned by the two parity classes.
  {
    const auto level = SoficLevel::torus_quotient(z, {8}, 0);
    NearKernelOptions o;
    o.relators = 1;
    o.delta = 0.1;
    const auto w = near_kernel(level, principal(z, "x^2 - 1"), o);
    ASSERT_EQ(w.dimension, 2u);
    const auto fit = covering_slope(w, eps);
    EXPECT_NEAR(fit.slope, 2.0, 0.3);
  }
}

TEST(Additivity, FailsOverF2) {
  auto f2 = GroupSpec::free(2);
  QuotientSchedule s;
  s.sizes = {64, 128, 256};
  EstimatorOptions o;
  o.schedule.etas = {0.0};
  o.method = RankMethod::Exact;
  const auto r = additivity_failure_demo(quotient_chain(f2, s), o);
  EXPECT_EQ(r.middle_value, 1.0);
  EXPECT_EQ(r.sub_value, 2.0);
  EXPECT_DOUBLE_EQ(r.quotient_value, 1.0 / 256);
  EXPECT_FALSE(r.additivity_holds);
  auto z = GroupSpec::free_abelian(1);
  QuotientSchedule sz;
  sz.sizes = {4, 8};
  EXPECT_THROW(additivity_failure_demo(quotient_chain(z, sz), o), UnsupportedGroup);
}
