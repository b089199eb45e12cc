#include <benchmark/benchmark.h>

#include "soficrank/covering.hpp"
#include "soficrank/exact_rank.hpp"
#include "soficrank/parse.hpp"
#include "soficrank/sofic_rep.hpp"
#include "soficrank/spectral.hpp"

using namespace soficrank;

namespace {

GroupRingMatrix f2_laplacian(const GroupPtr& f2) {
  return GroupRingMatrix::scalar(parse_element(f2, "4 - a - a^-1 - b - b^-1"));
}

SoficLevel f2_level(const GroupPtr& f2, std::int64_t d) {
  QuotientSchedule s;
  s.sizes = {d};
  return quotient_chain(f2, s)[0];
}

}  // namespace

static void BM_Represent(benchmark::State& state) {
  auto f2 = GroupSpec::free(2);
  const auto level = f2_level(f2, state.range(0));
  const auto f = f2_laplacian(f2);
  for (auto _ : state) benchmark::DoNotOptimize(represent(level, f));
}
BENCHMARK(BM_Represent)->Arg(256)->Arg(4096);

static void BM_SingularProfile(benchmark::State& state) {
  auto f2 = GroupSpec::free(2);
  const auto a = represent(f2_level(f2, state.range(0)), f2_laplacian(f2));
  for (auto _ : state) benchmark::DoNotOptimize(singular_profile(a));
}
BENCHMARK(BM_SingularProfile)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_SlicedCounting(benchmark::State& state) {
  auto f2 = GroupSpec::free(2);
  const auto a = represent(f2_level(f2, state.range(0)), f2_laplacian(f2));
  const std::vector<double> etas{0.5, 0.1, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(sliced_counting_function(a, etas));
}
BENCHMARK(BM_SlicedCounting)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_ExactRank(benchmark::State& state) {
  auto f2 = GroupSpec::free(2);
  const GroupRingMatrix f = GroupRingMatrix::from_rows(
      f2, {{parse_element(f2, "a - 1")}, {parse_element(f2, "b - 1")}});
  const auto a = represent(f2_level(f2, state.range(0)), f);
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank(a.entries));
}
BENCHMARK(BM_ExactRank)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_LatticeCovering(benchmark::State& state) {
  const PseudometricSpec m{MetricKind::Theta, kInfinity};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lattice_covering(8, 1, static_cast<std::size_t>(state.range(0)), m, 0.125));
  }
}
BENCHMARK(BM_LatticeCovering)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_GreedyCovering(benchmark::State& state) {
  SplitMix64 rng(3);
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(state.range(0)),
                                       std::vector<double>(4));
  for (auto& p : pts)
    for (auto& v : p) v = rng.uniform();
  const PseudometricSpec m{MetricKind::Delta, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(covering_number_bruteforce(pts, m, 1, 0.125));
}
BENCHMARK(BM_GreedyCovering)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
