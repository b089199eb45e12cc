#pragma once

// Torus pseudometrics and brute-force covering numbers.
//
// A point of (T^n)^d is stored site-major: coordinate l of site x sits at
// index x * n + l. The base metric compares one site (Delta: l2 over the n
// coordinates, Theta: l-infinity); the product metric combines sites as
// ((1/d) sum_x rho_x^p)^(1/p), or the max for p = infinity.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace soficrank {

enum class MetricKind { Delta, Theta, DualGenerator };

std::string to_string(MetricKind k);
MetricKind metric_kind_from_string(const std::string& s);

struct PseudometricSpec {
  MetricKind kind = MetricKind::Delta;
  /// Product exponent in [1, infinity].
  double p = 2.0;

  void validate() const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Distance on R/Z, in [0, 1/2].
double circle_distance(double a, double b);

/// Base metric between two sites with n coordinates each.
double site_distance(MetricKind kind, std::span<const double> a,
                     std::span<const double> b);

/// Combines per-site distances with exponent p.
double product_combine(std::span<const double> site_distances, double p);

/// Product pseudometric on (T^n)^d for site-major points of length n * d.
double product_distance(const PseudometricSpec& metric, std::size_t n,
                        std::span<const double> a, std::span<const double> b);

using Distance = std::function<double(std::span<const double>, std::span<const double>)>;

inline constexpr std::size_t kCoveringBudget = 20000;

struct CoveringBounds {
  /// Greedy maximal 2 eps-separated set (a lower bound for S_eps).
  std::size_t lower = 0;
  /// Greedy eps-cover by open balls centered at sample points.
  std::size_t upper = 0;
  bool lower_computed = true;
  std::size_t points = 0;
};

/// Greedy covering of a finite sample scanned in the given order. Throws
/// BudgetExceeded above `budget` points.
CoveringBounds covering_number_bruteforce(const std::vector<std::vector<double>>& points,
                                          const Distance& dist, double eps,
                                          std::size_t budget = kCoveringBudget);

CoveringBounds covering_number_bruteforce(const std::vector<std::vector<double>>& points,
                                          const PseudometricSpec& metric, std::size_t n,
                                          double eps,
                                          std::size_t budget = kCoveringBudget);

/// The same greedy counts for the full lattice (Z/L)^(n d) / L under the
/// product metric, scanned in lexicographic order, without materializing the
/// points: each candidate checks the finitely many lattice offsets of norm
/// below the radius. The lower count is skipped (lower_computed = false) when
/// its offset ball makes the scan exceed `work_limit`.
CoveringBounds lattice_covering(std::size_t L, std::size_t n, std::size_t d,
                                const PseudometricSpec& metric, double eps,
                                double work_limit = 2e9);

}  // namespace soficrank
