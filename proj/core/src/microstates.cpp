#include "soficrank/microstates.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "soficrank/budget.hpp"
#include "soficrank/errors.hpp"
#include "soficrank/sofic_rep.hpp"

namespace soficrank {

std::string NearKernelSubspace::constraint_description() const {
  std::ostringstream os;
  os << "relators m=" << relator_prefix << ", relation constraints "
     << relation_constraints << " (power bound " << power_bound << "), "
     << (exact_mode ? "exact" : "approximate") << " mode";
  return os.str();
}

namespace {

// Products g_1...g_j of j elements of F for j = 2..power_bound + 1.
void relation_tuples(const std::vector<GroupElement>& F, std::size_t max_len,
                     std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t len) -> void {
    if (cur.size() == len) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < F.size(); ++i) {
      cur.push_back(i);
      self(self, len);
      cur.pop_back();
    }
  };
  for (std::size_t len = 2; len <= max_len; ++len) rec(rec, len);
}

}  // namespace

NearKernelSubspace near_kernel(const SoficLevel& level, const ModulePresentation& pres,
                               const NearKernelOptions& options) {
  if (!(options.delta > 0.0)) throw ValidationError("near_kernel needs delta > 0");
  if (options.relators > pres.relator_count()) {
    throw ValidationError("relator prefix " + std::to_string(options.relators) +
                          " exceeds the " + std::to_string(pres.relator_count()) +
                          " available relators");
  }
  const std::size_t d = level.degree();
  const std::size_t n = pres.rank();
  const std::size_t dim = n * d;

  NearKernelSubspace out;
  out.level_index = level.index();
  out.degree = d;
  out.block_cols = n;
  out.delta = options.delta;
  out.relator_prefix = options.relators;
  out.power_bound = options.power_bound;

  // Constraint operator: sum_j sigma(b_j)^T sigma(b_j), plus I_n (x) D^T D
  // for every relation defect D at a non-exact level.
  Eigen::MatrixXd c;
  bool nonzero = false;
  if (options.relators > 0) {
    const SoficMatrix a = represent(level, pres.relator_matrix(options.relators));
    require_dense(dim, dim, d, "near_kernel");
    const SoficMatrix g = gram(a);
    c = g.entries.to_dense();
    nonzero = g.entries.nnz() > 0;
  }
  if (!level.exact() && !options.relation_set.empty()) {
    std::vector<std::vector<std::size_t>> tuples;
    relation_tuples(options.relation_set, options.power_bound + 1, tuples);
    std::vector<Permutation> perms;
    for (const auto& g : options.relation_set) perms.push_back(level.permutation(g));
    for (const auto& t : tuples) {
      Permutation prod = perms[t[0]];
      GroupElement word = options.relation_set[t[0]];
      for (std::size_t q = 1; q < t.size(); ++q) {
        prod = compose(prod, perms[t[q]]);
        word = word * options.relation_set[t[q]];
      }
      const Permutation direct = level.permutation(word);
      if (prod == direct) continue;
      require_dense(dim, dim, d, "near_kernel");
      if (c.size() == 0) c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim));
      Eigen::MatrixXd defect = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                     static_cast<Eigen::Index>(d));
      for (std::size_t x = 0; x < d; ++x) {
        defect(prod[x], static_cast<Eigen::Index>(x)) += 1.0;
        defect(direct[x], static_cast<Eigen::Index>(x)) -= 1.0;
      }
      const Eigen::MatrixXd dtd = defect.transpose() * defect;
      for (std::size_t l = 0; l < n; ++l) {
        const auto off = static_cast<Eigen::Index>(l * d);
        c.block(off, off, static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) += dtd;
      }
      ++out.relation_constraints;
      nonzero = true;
    }
  }
  out.exact_mode = out.relation_constraints == 0;
  out.threshold = options.delta / static_cast<double>(1 + out.relation_constraints);

  if (!nonzero) {
    out.dimension = dim;
    out.spectrum.assign(dim, 0.0);
    if (options.want_basis) {
      out.basis = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      c, options.want_basis ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("eigensolver did not converge on the constraint operator");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  out.spectrum.assign(lambda.data(), lambda.data() + lambda.size());
  std::size_t count = 0;
  while (count < dim && lambda[static_cast<Eigen::Index>(count)] < out.threshold) ++count;
  if (out.threshold >= lambda.maxCoeff()) {
    count = dim;
    out.warnings.push_back("threshold is at or above the largest constraint eigenvalue; "
                           "returning the full space");
  }
  out.dimension = count;
  if (options.want_basis) {
    out.basis = eig.eigenvectors().leftCols(static_cast<Eigen::Index>(count));
  }
  return out;
}

std::size_t TorusMicrostate::window_index(const GroupElement& g) const {
  for (std::size_t w = 0; w < window_.size(); ++w) {
    if (window_[w] == g) return w;
  }
  return window_.size();
}

double TorusMicrostate::value(std::size_t x, std::size_t l, std::size_t w) const {
  return base_[l * degree_ + inverse_[w][x]];
}

std::vector<double> TorusMicrostate::at(std::size_t x, std::size_t w) const {
  std::vector<double> out(n_);
  for (std::size_t l = 0; l < n_; ++l) out[l] = value(x, l, w);
  return out;
}

TorusMicrostate microstate_from_vector(const SoficLevel& level,
                                       std::span<const double> xi, std::size_t n,
                                       std::vector<GroupElement> window) {
  const std::size_t d = level.degree();
  if (n == 0 || xi.size() != n * d) {
    throw ValidationError("vector length " + std::to_string(xi.size()) +
                          " does not match n * degree = " + std::to_string(n * d));
  }
  TorusMicrostate ms;
  ms.level_index_ = level.index();
  ms.degree_ = d;
  ms.n_ = n;
  ms.exact_ = level.exact();
  ms.base_.resize(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    double v = xi[i] - std::floor(xi[i]);
    if (v >= 1.0) v = 0.0;
    ms.base_[i] = v;
  }
  for (const auto& g : window) {
    if (!same_group(g.group(), level.group())) {
      throw GroupMismatch("window element from a different group");
    }
    ms.forward_.push_back(level.permutation(g));
    ms.inverse_.push_back(invert(ms.forward_.back()));
  }
  ms.window_ = std::move(window);
  return ms;
}

MembershipReport map_membership(const TorusMicrostate& ms, const SoficLevel& level,
                                const PseudometricSpec& metric,
                                const std::vector<GroupElement>& F, double delta,
                                const ModulePresentation& pres, std::size_t m) {
  if (level.index() != ms.level_index() || level.degree() != ms.degree()) {
    throw ValidationError("microstate was built at a different level");
  }
  if (m > pres.relator_count()) {
    throw ValidationError("relator prefix exceeds the available relators");
  }
  const std::size_t d = ms.degree();
  const std::size_t n = ms.rank();
  const GroupPtr& group = level.group();
  const std::size_t we = ms.window_index(GroupElement::identity(group));
  if (we == ms.window().size()) {
    throw ValidationError("microstate window must contain the identity");
  }

  MembershipReport out;
  out.delta = delta;
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (const auto& g : F) {
    const std::size_t wg = ms.window_index(g.inverse());
    if (wg == ms.window().size()) {
      throw ValidationError("microstate window does not contain " + g.inverse().str());
    }
    const Permutation sg = level.permutation(g);
    double acc = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
      for (std::size_t l = 0; l < n; ++l) {
        a[l] = ms.value(sg[x], l, we);  // phi(sigma(g) x)(e)
        b[l] = ms.value(x, l, wg);      // (g phi(x))(e) = phi(x)(g^-1)
      }
      const double r = site_distance(metric.kind, a, b);
      acc += r * r;
    }
    const double defect = std::sqrt(acc / static_cast<double>(d));
    out.defects.push_back({g, defect});
    out.equivariant = out.equivariant && defect < delta;
  }

  for (std::size_t k = 0; k < m; ++k) {
    const auto& relator = pres.relators()[k];
    std::vector<std::pair<std::size_t, double>> terms;  // (window slot * n + l, coeff)
    for (std::size_t l = 0; l < n; ++l) {
      for (const auto& [w, c] : relator[l].terms()) {
        const std::size_t slot = ms.window_index(GroupElement(group, w));
        if (slot == ms.window().size()) {
          throw ValidationError("microstate window does not cover the support of relator " +
                                std::to_string(k + 1));
        }
        terms.emplace_back(slot * n + l, c.convert_to<double>());
      }
    }
    double acc = 0.0;
    for (std::size_t x = 0; x < d; ++x) {
      double s = 0.0;
      for (const auto& [key, c] : terms) s += c * ms.value(x, key % n, key / n);
      const double t = circle_distance(s, 0.0);
      acc += t * t;
    }
    const double value = acc / static_cast<double>(d);
    out.smallness.push_back(value);
    out.small = out.small && value < delta * delta;
  }
  out.member = out.equivariant && out.small;
  return out;
}

void write_microstates_csv(std::ostream& os, const std::vector<TorusMicrostate>& set) {
  os << "microstate,level,point,coordinate,value\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& ms = set[i];
    const std::size_t w = ms.window().size();
    for (std::size_t x = 0; x < ms.degree(); ++x) {
      for (std::size_t l = 0; l < ms.rank(); ++l) {
        for (std::size_t q = 0; q < w; ++q) {
          os << i << ',' << ms.level_index() << ',' << x << ',' << l * w + q << ','
             << ms.value(x, l, q) << '\n';
        }
      }
    }
  }
}

}  // namespace soficrank
