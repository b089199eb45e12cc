#include "soficrank/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "soficrank/budget.hpp"
#include "soficrank/errors.hpp"

namespace soficrank {

namespace {

// Relative zero for the slicing path. LDL^T pivots carry rounding of order
// eps * ||G||, so the shift has to sit well above that.
constexpr double kSliceZero = 1e-6;

double count_at_or_below(const std::vector<double>& sorted, double threshold) {
  return static_cast<double>(
      std::upper_bound(sorted.begin(), sorted.end(), threshold) - sorted.begin());
}

}  // namespace

std::string to_string(SpectralMethod m) {
  return m == SpectralMethod::DenseEigen ? "dense-eigen" : "iterative-counting";
}

SpectralProfile singular_profile(const SoficMatrix& a) {
  const std::size_t rows = a.entries.rows();
  const std::size_t cols = a.entries.cols();
  require_dense(std::max(rows, cols), std::max(rows, cols), a.degree,
                "singular_profile");
  SpectralProfile out;
  out.level_index = a.level_index;
  out.degree = a.degree;
  out.block_rows = a.block_rows;
  out.block_cols = a.block_cols;
  out.method = SpectralMethod::DenseEigen;
  out.values.assign(cols, 0.0);
  if (rows > 0 && cols > 0) {
    const Eigen::MatrixXd dense = a.entries.to_dense();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
    if (svd.info() != Eigen::Success) {
      throw NumericalFailure("singular value decomposition did not converge");
    }
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      out.values[static_cast<std::size_t>(i)] = std::max(0.0, sv[i]);
    }
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

CountingFunction counting_function(const SpectralProfile& profile,
                                   std::span<const double> etas) {
  CountingFunction out;
  out.level_index = profile.level_index;
  out.degree = profile.degree;
  out.block_cols = profile.block_cols;
  out.method = profile.method;
  const double d = static_cast<double>(profile.degree);
  for (double eta : etas) {
    if (!(eta >= 0.0)) throw ValidationError("thresholds must be nonnegative");
    const double t = eta == 0.0 ? kRelativeZero * profile.largest()
                                : eta + kThresholdSlack;
    out.etas.push_back(eta);
    out.values.push_back(d == 0.0 ? 0.0 : count_at_or_below(profile.values, t) / d);
  }
  return out;
}

double kernel_fraction(const SpectralProfile& profile) {
  const double zero = 0.0;
  return counting_function(profile, std::span<const double>(&zero, 1)).values[0];
}

CountingFunction sliced_counting_function(const SoficMatrix& a,
                                          std::span<const double> etas) {
  CountingFunction out;
  out.level_index = a.level_index;
  out.degree = a.degree;
  out.block_cols = a.block_cols;
  out.method = SpectralMethod::IterativeCounting;
  const std::size_t n = a.entries.cols();
  const double d = static_cast<double>(a.degree);

  const SoficMatrix g = gram(a);
  Eigen::SparseMatrix<double> gm = g.entries.to_eigen();
  // Gershgorin bound on the largest eigenvalue of the Gram matrix.
  double bound = 0.0;
  {
    const auto& rp = g.entries.row_ptr();
    const auto& vals = g.entries.values();
    for (std::size_t r = 0; r + 1 < rp.size(); ++r) {
      double s = 0.0;
      for (std::size_t q = rp[r]; q < rp[r + 1]; ++q) s += std::abs(static_cast<double>(vals[q]));
      bound = std::max(bound, s);
    }
  }
  Eigen::SparseMatrix<double> id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  id.setIdentity();

  for (double eta : etas) {
    if (!(eta >= 0.0)) throw ValidationError("thresholds must be nonnegative");
    out.etas.push_back(eta);
    if (n == 0) {
      out.values.push_back(0.0);
      continue;
    }
    double shift = eta == 0.0 ? kSliceZero * kSliceZero * bound
                              : (eta + kThresholdSlack) * (eta + kThresholdSlack);
    if (shift == 0.0) {
      // Zero matrix: every singular value is zero.
      out.values.push_back(static_cast<double>(n) / d);
      continue;
    }
    Eigen::SparseMatrix<double> shifted = gm - shift * id;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalFailure("sparse LDL^T factorization failed at eta = " +
                             std::to_string(eta));
    }
    const auto& diag = ldlt.vectorD();
    std::size_t negative = 0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) negative += diag[i] < 0.0;
    out.values.push_back(static_cast<double>(negative) / d);
  }
  return out;
}

MomentReport moment_check(const SoficLevel& level, const GroupRingMatrix& f,
                          std::size_t kmax) {
  if (kmax == 0) throw ValidationError("moment_check needs kmax >= 1");
  const SoficMatrix a = represent(level, f);
  const SparseIntMatrix g = multiply(a.entries.transpose(), a.entries);
  const auto powers = gram_powers(f, kmax);
  const Integer d(static_cast<long long>(level.degree()));

  MomentReport out;
  out.level_index = level.index();
  out.degree = level.degree();
  std::map<Word, bool, ShortLex> fixes;  // word -> sigma(word) has a fixed point
  SparseIntMatrix p = SparseIntMatrix::identity(g.rows());
  for (std::size_t k = 1; k <= kmax; ++k) {
    p = multiply(p, g);
    const Rational empirical(p.trace(), d);
    const Rational exact(identity_trace(powers[k]));
    MomentRow row;
    row.k = k;
    row.empirical = empirical.convert_to<double>();
    row.exact = exact.convert_to<double>();
    row.difference = abs(empirical - exact).convert_to<double>();
    row.support_radius = powers[k].diameter();
    for (std::size_t j = 0; j < powers[k].rows() && !row.wraparound; ++j) {
      for (const auto& term : powers[k](j, j).terms()) {
        const Word& w = term.first;
        if (f.group()->is_identity(w)) continue;
        auto it = fixes.find(w);
        if (it == fixes.end()) {
          it = fixes.emplace(w, fixed_points(level.permutation(w)) > 0).first;
        }
        if (it->second) {
          row.wraparound = true;
          break;
        }
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

MomentReport perturbation_moment_check(const SoficLevel& level,
                                       const GroupRingMatrix& f, double s,
                                       std::size_t kmax, std::uint64_t seed) {
  if (!(s >= 0.0)) throw ValidationError("noise scale must be nonnegative");
  MomentReport out = moment_check(level, f, kmax);
  out.noise_scale = s;

  const SoficMatrix a = represent(level, f);
  const auto rows = static_cast<Eigen::Index>(a.entries.rows());
  const auto cols = static_cast<Eigen::Index>(a.entries.cols());
  require_dense(static_cast<std::size_t>(std::max(rows, cols)),
                static_cast<std::size_t>(std::max(rows, cols)), a.degree,
                "perturbation_moment_check");
  const Eigen::MatrixXd dense = a.entries.to_dense();
  if (rows > 0 && cols > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> base(dense.transpose() * dense,
                                                        Eigen::EigenvaluesOnly);
    out.operator_norm = std::sqrt(std::max(0.0, base.eigenvalues().maxCoeff()));
  }
  const double n = static_cast<double>(a.block_cols);
  const double d = static_cast<double>(a.degree);
  out.first_moment_bound = n * 2.0 * s * (out.operator_norm + s);

  if (s == 0.0 || rows == 0 || cols == 0) {
    for (const auto& r : out.rows) {
      out.perturbed.push_back(r.empirical);
      out.drift.push_back(0.0);
    }
    return out;
  }

  SplitMix64 rng(seed);
  Eigen::MatrixXd noise(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) noise(r, c) = rng.normal();
  }
  const double target = s * std::sqrt(n * d);
  noise *= target / noise.norm();
  out.achieved_noise = noise.norm() / std::sqrt(n * d);

  const Eigen::MatrixXd b = dense + noise;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.transpose() * b,
                                                     Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("eigensolver did not converge on the perturbed Gram matrix");
  }
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  for (const auto& r : out.rows) {
    const double m = lambda.array().pow(static_cast<double>(r.k)).sum() / d;
    out.perturbed.push_back(m);
    out.drift.push_back(m - r.empirical);
  }
  return out;
}

}  // namespace soficrank
