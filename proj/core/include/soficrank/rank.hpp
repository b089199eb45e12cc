#pragma once

// Estimators for dim ker rho(f) and the von Neumann-Lueck rank of a
// presented module, from the counting functions d_{eta,i} of sofic levels.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soficrank/group_ring.hpp"
#include "soficrank/sofic_level.hpp"
#include "soficrank/spectral.hpp"

namespace soficrank {

/// Thresholds visited in order (decreasing, 0 allowed) and the number of
/// trailing levels averaged per threshold.
struct EtaSchedule {
  std::vector<double> etas;
  std::size_t tail = 3;

  /// eta_j = 2^-j for j = 1..20, then 0.
  static EtaSchedule standard();
  void validate() const;
};

enum class RankMethod {
  Auto,    // dense when it fits the budget, slicing otherwise
  Dense,
  Sliced,
  Exact,   // eta = 0 by integer elimination, eta > 0 as Auto
};

std::string to_string(RankMethod m);

struct EstimatorOptions {
  EtaSchedule schedule = EtaSchedule::standard();
  RankMethod method = RankMethod::Auto;
  /// Upper bound on worker threads; levels are independent.
  std::size_t threads = 1;
};

struct RankRow {
  std::size_t level = 0;
  std::size_t degree = 0;
  double eta = 0.0;
  double fraction = 0.0;
  std::string method;
};

struct TailStat {
  double eta = 0.0;
  std::size_t levels = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct RankEstimate {
  std::string target;
  std::size_t block_cols = 0;
  std::vector<RankRow> table;
  std::vector<TailStat> tails;
  /// min over eta of the tail mean.
  double estimate = 0.0;
  /// Min and max over the last half of the levels at the final eta.
  double envelope_low = 0.0;
  double envelope_high = 0.0;
  /// d_{eta,i} at the final eta and the last level.
  double final_level_value = 0.0;
  EtaSchedule schedule;
  std::string method;
  std::vector<std::string> diagnostics;

  // vr_estimate only: final-level kernel fraction for relator prefixes 0..k.
  std::vector<double> prefix_fractions;
  std::optional<bool> prefix_monotone;
};

RankEstimate vnd_estimate(const std::vector<SoficLevel>& levels,
                          const GroupRingMatrix& f,
                          const EstimatorOptions& options = {});

/// vr of Z(Gamma)^n / <b_1..b_k> as the kernel fraction of the stacked
/// relator matrix.
RankEstimate vr_estimate(const std::vector<SoficLevel>& levels,
                         const ModulePresentation& pres, std::size_t k,
                         const EstimatorOptions& options = {});

/// log((3 + 3 eps) / eps) / log(1 / eps); throws unless 0 < eps < 1.
double sandwich_factor(double eps);

struct SandwichRow {
  std::size_t level = 0;
  std::size_t degree = 0;
  double eta = 0.0;
  double eps = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct CoveringSandwich {
  std::vector<SandwichRow> rows;
};

CoveringSandwich covering_sandwich(const CountingFunction& counts,
                                   std::span<const double> eps);

/// dim ker lambda(f) for f over Z^d from the Fourier symbol on a G^d grid.
double fourier_oracle_vr(const GroupRingMatrix& f, std::size_t grid);

}  // namespace soficrank
