#include "soficrank/mdim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "soficrank/budget.hpp"
#include "soficrank/errors.hpp"
#include "soficrank/parallel.hpp"
#include "soficrank/sofic_rep.hpp"

namespace soficrank {

double covering_exponent(std::size_t count, std::size_t degree, double eps) {
  if (count == 0 || degree == 0) return 0.0;
  return std::log(static_cast<double>(count)) /
         (static_cast<double>(degree) * std::log(1.0 / eps));
}

namespace {

std::size_t lattice_side(double eps) {
  return static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-9));
}

double ipow(std::size_t base, std::size_t exp) {
  return std::pow(static_cast<double>(base), static_cast<double>(exp));
}

// Lattice points sum_b (k_b / L) u_b mod 1, u_b scaled to sup-norm 1, in
// site-major layout. The vector layout of W is block-major.
std::vector<std::vector<double>> subspace_lattice(const NearKernelSubspace& w,
                                                  std::size_t L) {
  const std::size_t k = w.dimension;
  const std::size_t d = w.degree;
  const std::size_t n = w.block_cols;
  Eigen::MatrixXd u = w.basis;
  for (Eigen::Index b = 0; b < u.cols(); ++b) {
    const double m = u.col(b).cwiseAbs().maxCoeff();
    if (m > 0.0) u.col(b) /= m;
  }
  const auto total = static_cast<std::size_t>(ipow(L, k));
  std::vector<std::vector<double>> points;
  points.reserve(total);
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * d));
    for (std::size_t b = 0; b < k; ++b) {
      v += (static_cast<double>(digits[b]) / static_cast<double>(L)) *
           u.col(static_cast<Eigen::Index>(b));
    }
    std::vector<double> p(n * d);
    for (std::size_t x = 0; x < d; ++x) {
      for (std::size_t l = 0; l < n; ++l) {
        const double t = v[static_cast<Eigen::Index>(l * d + x)];
        double f = t - std::floor(t);
        if (f >= 1.0) f = 0.0;
        p[x * n + l] = f;
      }
    }
    points.push_back(std::move(p));
    for (std::size_t b = k; b-- > 0;) {
      if (++digits[b] < L) break;
      digits[b] = 0;
    }
  }
  return points;
}

void brute_force(MdimRow& row, const NearKernelSubspace& w,
                 const PseudometricSpec& metric) {
  const std::size_t L = lattice_side(row.eps);
  const std::size_t n = w.block_cols;
  const std::size_t d = w.degree;
  try {
    CoveringBounds b;
    if (w.dimension == n * d) {
      if (ipow(L, n * d) > static_cast<double>(1ULL << 30)) {
        row.brute_status = "skipped: lattice of " + std::to_string(L) + "^" +
                           std::to_string(n * d) + " points";
        return;
      }
      b = lattice_covering(L, n, d, metric, row.eps);
    } else if (w.dimension == 0) {
      b.lower = b.upper = b.points = 1;
    } else {
      if (ipow(L, w.dimension) > static_cast<double>(kCoveringBudget)) {
        row.brute_status = "skipped: subspace sample of " + std::to_string(L) + "^" +
                           std::to_string(w.dimension) + " points";
        return;
      }
      b = covering_number_bruteforce(subspace_lattice(w, L), metric, n, row.eps);
    }
    row.brute_status = "ok";
    row.brute_points = b.points;
    row.brute_upper_count = b.upper;
    row.brute_exponent = covering_exponent(b.upper, d, row.eps);
    if (b.lower_computed) {
      row.brute_lower_count = b.lower;
      row.brute_lower_exponent = covering_exponent(b.lower, d, row.eps);
    }
  } catch (const BudgetExceeded& e) {
    row.brute_status = std::string("skipped: ") + e.what();
  }
}

}  // namespace

MdimReport mdim_estimate(const std::vector<SoficLevel>& levels,
                         const ModulePresentation& pres, const MdimOptions& options) {
  if (levels.empty()) throw ValidationError("mdim_estimate needs at least one level");
  if (!(options.delta > 0.0)) throw ValidationError("delta must be positive");
  options.metric.validate();
  for (double e : options.eps) sandwich_factor(e);  // range check
  const std::size_t m = options.relators == kAllRelators ? pres.relator_count()
                                                          : options.relators;
  if (m > pres.relator_count()) {
    throw ValidationError("relator prefix " + std::to_string(m) + " exceeds the " +
                          std::to_string(pres.relator_count()) + " available relators");
  }
  for (const auto& l : levels) {
    if (!same_group(l.group(), pres.group())) {
      throw GroupMismatch("level group differs from the presentation group");
    }
  }

  MdimReport out;
  std::ostringstream target;
  target << "mdim(dual of Z(" << pres.group()->describe() << ")^" << pres.rank();
  if (m > 0) target << " / <" << m << " relators>";
  target << ")";
  out.target = target.str();
  out.block_cols = pres.rank();
  out.relators = m;
  out.delta = options.delta;
  out.eta = std::sqrt(options.delta);
  out.metric = options.metric;

  const GroupRingMatrix f = pres.relator_matrix(m);
  struct LevelResult {
    std::vector<MdimRow> rows;
    std::vector<std::string> warnings;
  };
  auto results = parallel_map<LevelResult>(levels.size(), options.threads, [&](std::size_t i) {
    const SoficLevel& level = levels[i];
    const std::size_t d = level.degree();
    const bool brute = options.brute_force && d <= options.brute_max_degree;
    NearKernelOptions nk;
    nk.relators = m;
    nk.delta = options.delta;
    nk.relation_set = options.relation_set;
    nk.power_bound = options.power_bound;
    nk.want_basis = brute;
    const NearKernelSubspace w = near_kernel(level, pres, nk);

    double count = static_cast<double>(pres.rank());
    if (m > 0) {
      const SoficMatrix a = represent(level, f);
      const std::size_t side = std::max(a.entries.rows(), a.entries.cols());
      const std::vector<double> eta{out.eta};
      count = fits_dense(side, side, d) ? counting_function(singular_profile(a), eta).values[0]
                                        : sliced_counting_function(a, eta).values[0];
    }
    LevelResult r;
    for (const auto& msg : w.warnings) {
      r.warnings.push_back("level " + std::to_string(level.index()) + ": " + msg);
    }
    for (double e : options.eps) {
      MdimRow row;
      row.level = level.index();
      row.degree = d;
      row.eps = e;
      row.near_kernel_dim = w.dimension;
      row.lower = static_cast<double>(w.dimension) / static_cast<double>(d);
      row.upper = count * sandwich_factor(e);
      if (brute) brute_force(row, w, options.brute_metric);
      r.rows.push_back(std::move(row));
    }
    return r;
  });
  for (auto& r : results) {
    for (auto& row : r.rows) out.rows.push_back(std::move(row));
    for (auto& w : r.warnings) out.warnings.push_back(std::move(w));
  }
  const auto& last = results.back().rows;
  for (const auto& row : last) out.summary.push_back({row.eps, row.lower, row.upper});
  return out;
}

SlopeFit covering_slope(const NearKernelSubspace& w, const std::vector<double>& eps) {
  if (eps.size() < 2) throw ValidationError("a slope fit needs at least two scales");
  if (w.basis.cols() != static_cast<Eigen::Index>(w.dimension)) {
    throw ValidationError("covering_slope needs the subspace basis");
  }
  SlopeFit out;
  out.dimension = w.dimension;
  out.eps = eps;
  const double finest = *std::min_element(eps.begin(), eps.end());
  if (!(finest > 0.0)) throw ValidationError("scales must be positive");
  // Mesh of half the finest scale.
  const auto M = static_cast<std::size_t>(std::ceil(2.0 / finest)) + 1;
  const std::size_t k = w.dimension;
  if (ipow(M, k) > static_cast<double>(kCoveringBudget)) {
    throw BudgetExceeded("cube section sample of " + std::to_string(M) + "^" +
                         std::to_string(k) + " points exceeds the covering budget");
  }
  std::vector<std::vector<double>> points;
  const auto total = static_cast<std::size_t>(ipow(M, k));
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(w.basis.rows());
    for (std::size_t b = 0; b < k; ++b) {
      v += (static_cast<double>(digits[b]) / static_cast<double>(M - 1)) *
           w.basis.col(static_cast<Eigen::Index>(b));
    }
    points.emplace_back(v.data(), v.data() + v.size());
    for (std::size_t b = k; b-- > 0;) {
      if (++digits[b] < M) break;
      digits[b] = 0;
    }
  }
  const Distance euclid = [](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double e : eps) {
    const auto c = covering_number_bruteforce(points, euclid, e).upper;
    out.counts.push_back(c);
    const double x = std::log(1.0 / e);
    const double y = std::log(static_cast<double>(c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double q = static_cast<double>(eps.size());
  out.slope = (q * sxy - sx * sy) / (q * sxx - sx * sx);
  return out;
}

AdditivityReport additivity_failure_demo(const std::vector<SoficLevel>& levels,
                                         const EstimatorOptions& options) {
  if (levels.empty()) throw ValidationError("the demo needs levels");
  const GroupPtr& group = levels.front().group();
  if (group->kind() != GroupKind::Free || group->rank() < 2) {
    throw UnsupportedGroup("the additivity demo runs over a free group of rank >= 2");
  }
  const auto n = static_cast<std::size_t>(group->rank());
  std::vector<std::vector<GroupRingElement>> relators;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = GroupElement::generator(group, i);
    relators.push_back({GroupRingElement::monomial(x) - GroupRingElement::one(group)});
  }
  const ModulePresentation middle = ModulePresentation::free_module(group, 1);
  const ModulePresentation sub = ModulePresentation::free_module(group, n);
  const ModulePresentation quotient(group, 1, relators);

  AdditivityReport out;
  out.n = n;
  out.middle = vr_estimate(levels, middle, 0, options);
  out.sub = vr_estimate(levels, sub, 0, options);
  out.quotient = vr_estimate(levels, quotient, n, options);
  out.middle_value = out.middle.final_level_value;
  out.sub_value = out.sub.final_level_value;
  out.quotient_value = out.quotient.final_level_value;
  out.additivity_holds =
      std::abs(out.middle_value - (out.sub_value + out.quotient_value)) <= 0.5;
  return out;
}

}  // namespace soficrank
