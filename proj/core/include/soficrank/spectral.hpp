#pragma once

// Singular-value profiles of sofic matrices, normalized counting functions
// d_{eta,i} = (1/d) #{singular values <= eta}, and moment comparisons
// against the exact traces tau (x) Tr((f*f)^k).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soficrank/group_ring.hpp"
#include "soficrank/sofic_level.hpp"
#include "soficrank/sofic_rep.hpp"

namespace soficrank {

enum class SpectralMethod { DenseEigen, IterativeCounting };

std::string to_string(SpectralMethod m);

/// Thresholds are widened by this much so that ties count as <= eta.
inline constexpr double kThresholdSlack = 1e-12;
/// Singular values below this times the largest one count as zero at eta = 0.
inline constexpr double kRelativeZero = 1e-8;

struct SpectralProfile {
  std::size_t level_index = 0;
  std::size_t degree = 0;
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  /// Ascending, length block_cols * degree, padded with zeros when the
  /// matrix has fewer rows than columns.
  std::vector<double> values;
  SpectralMethod method = SpectralMethod::DenseEigen;

  double largest() const { return values.empty() ? 0.0 : values.back(); }
};

struct CountingFunction {
  std::size_t level_index = 0;
  std::size_t degree = 0;
  std::size_t block_cols = 0;
  std::vector<double> etas;
  std::vector<double> values;
  SpectralMethod method = SpectralMethod::DenseEigen;
};

/// Dense singular value decomposition of sigma_i(f). Throws BudgetExceeded
/// when the dense matrix does not fit.
SpectralProfile singular_profile(const SoficMatrix& a);

/// d_{eta,i} for each eta. eta = 0 uses the relative zero threshold.
CountingFunction counting_function(const SpectralProfile& profile,
                                   std::span<const double> etas);

/// d_{0,i}: the normalized kernel dimension.
double kernel_fraction(const SpectralProfile& profile);

/// Counting by spectrum slicing: the inertia of A^T A - eta^2 I from a sparse
/// LDL^T factorization gives #{singular values < eta} without a full
/// eigendecomposition. Exact up to pivot rounding near the threshold.
CountingFunction sliced_counting_function(const SoficMatrix& a,
                                          std::span<const double> etas);

struct MomentRow {
  std::size_t k = 0;
  /// (1/d) Tr((A^T A)^k), computed exactly and rounded once.
  double empirical = 0.0;
  double exact = 0.0;
  double difference = 0.0;
  /// Some non-identity g in the support of the diagonal of (f*f)^k has a
  /// fixed point at this level, so the finite trace may pick it up.
  bool wraparound = false;
  /// Largest word length in the support of (f*f)^k.
  std::int64_t support_radius = 0;
};

struct MomentReport {
  std::size_t level_index = 0;
  std::size_t degree = 0;
  std::vector<MomentRow> rows;
  // Only set by perturbation_moment_check.
  double noise_scale = 0.0;
  double achieved_noise = 0.0;
  double operator_norm = 0.0;
  std::vector<double> perturbed;
  std::vector<double> drift;
  std::optional<double> first_moment_bound;
};

MomentReport moment_check(const SoficLevel& level, const GroupRingMatrix& f,
                          std::size_t kmax);

/// Adds a Gaussian matrix E, rescaled so that ||E||_2 (normalized HS) equals
/// s, to sigma_i(f) and compares the moments of (A+E)^T (A+E) with those of
/// A^T A. With s = 0 the perturbed moments are the exact ones.
MomentReport perturbation_moment_check(const SoficLevel& level,
                                       const GroupRingMatrix& f, double s,
                                       std::size_t kmax, std::uint64_t seed);

}  // namespace soficrank
