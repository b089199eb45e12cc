#pragma once

// Interval estimates of p-metric mean dimension for presented modules:
// lower exponent dim W / d from the near-kernel subspace, upper exponent
// from the covering sandwich of the stacked relator matrix, and brute-force
// covering exponents at tiny degrees.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "soficrank/covering.hpp"
#include "soficrank/microstates.hpp"
#include "soficrank/rank.hpp"

namespace soficrank {

inline constexpr std::size_t kAllRelators = std::numeric_limits<std::size_t>::max();

struct MdimOptions {
  std::vector<double> eps{0.125, 0.015625, std::ldexp(1.0, -10), std::ldexp(1.0, -20)};
  double delta = 1e-6;
  std::size_t relators = kAllRelators;
  PseudometricSpec metric{MetricKind::Delta, 2.0};
  std::vector<GroupElement> relation_set;
  std::size_t power_bound = 1;
  bool brute_force = true;
  std::size_t brute_max_degree = 12;
  /// Brute force compares sites in l-infinity with a sup product.
  PseudometricSpec brute_metric{MetricKind::Theta, kInfinity};
  std::size_t threads = 1;
};

struct MdimRow {
  std::size_t level = 0;
  std::size_t degree = 0;
  double eps = 0.0;
  std::size_t near_kernel_dim = 0;
  double lower = 0.0;
  double upper = 0.0;
  /// Brute force: "ok", "skipped: ..." or "not attempted".
  std::string brute_status = "not attempted";
  std::optional<std::size_t> brute_points;
  std::optional<std::size_t> brute_upper_count;
  std::optional<std::size_t> brute_lower_count;
  std::optional<double> brute_exponent;
  std::optional<double> brute_lower_exponent;
};

struct MdimSummary {
  double eps = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
  bool contains(double v) const { return lower - 1e-12 <= v && v <= upper + 1e-12; }
};

struct MdimReport {
  std::string target;
  std::size_t block_cols = 0;
  std::size_t relators = 0;
  double delta = 0.0;
  double eta = 0.0;
  PseudometricSpec metric;
  std::vector<MdimRow> rows;
  /// Interval at the last level per eps.
  std::vector<MdimSummary> summary;
  std::vector<std::string> warnings;
};

MdimReport mdim_estimate(const std::vector<SoficLevel>& levels,
                         const ModulePresentation& pres, const MdimOptions& options = {});

/// Greedy exponent log(count) / (d log(1/eps)).
double covering_exponent(std::size_t count, std::size_t degree, double eps);

struct SlopeFit {
  std::size_t dimension = 0;
  std::vector<double> eps;
  std::vector<std::size_t> counts;
  double slope = 0.0;
};

/// Least-squares slope of log S_eps against log(1/eps) for the unit cube
/// section {sum_b t_b u_b : t in [0,1]^k} of W in the Euclidean metric.
SlopeFit covering_slope(const NearKernelSubspace& w, const std::vector<double>& eps);

struct AdditivityReport {
  std::size_t n = 0;
  RankEstimate middle;    // Z(F_n): free of rank 1
  RankEstimate sub;       // augmentation ideal: free of rank n
  RankEstimate quotient;  // Z(F_n) / (x_i - e)
  double middle_value = 0.0;
  double sub_value = 0.0;
  double quotient_value = 0.0;
  bool additivity_holds = true;
};

/// The exact sequence 0 -> I -> Z(F_n) -> Z -> 0 with the augmentation ideal
/// I free of rank n: vr is 1 in the middle, n on the left and 0 on the right.
AdditivityReport additivity_failure_demo(const std::vector<SoficLevel>& levels,
                                         const EstimatorOptions& options);

}  // namespace soficrank
