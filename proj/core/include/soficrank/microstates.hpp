#pragma once

// Finite models of the microstate spaces: near-kernel subspaces of the
// relator Gram operator, torus microstates phi_xi built from vectors, and
// membership checks for Map(rho | T, F, m, delta, sigma_i).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "soficrank/covering.hpp"
#include "soficrank/group_ring.hpp"
#include "soficrank/sofic_level.hpp"

namespace soficrank {

struct NearKernelOptions {
  /// Relator prefix m.
  std::size_t relators = 0;
  double delta = 1e-3;
  /// Relation set F for the multiplicativity constraints (approximate mode).
  std::vector<GroupElement> relation_set;
  /// Products of up to power_bound + 1 elements of F are constrained.
  std::size_t power_bound = 1;
  /// Skip the basis and keep only the dimension and spectrum.
  bool want_basis = true;
};

struct NearKernelSubspace {
  std::size_t level_index = 0;
  std::size_t degree = 0;
  std::size_t block_cols = 0;
  std::size_t dimension = 0;
  /// (n d) x dimension, orthonormal columns. Empty when want_basis is false.
  Eigen::MatrixXd basis;
  double delta = 0.0;
  /// delta divided by the number of constraint operators.
  double threshold = 0.0;
  std::size_t relator_prefix = 0;
  std::size_t relation_constraints = 0;
  std::size_t power_bound = 0;
  bool exact_mode = true;
  /// Ascending eigenvalues of the summed constraint operator.
  std::vector<double> spectrum;
  std::vector<std::string> warnings;

  std::string constraint_description() const;
};

NearKernelSubspace near_kernel(const SoficLevel& level, const ModulePresentation& pres,
                               const NearKernelOptions& options);

/// phi(x)(l)(g) = xi(l)(sigma(g)^-1 x) mod 1 on a finite window of Gamma.
/// xi is block-major: coordinate l of site x is xi[l * d + x].
class TorusMicrostate {
 public:
  std::size_t level_index() const noexcept { return level_index_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t rank() const noexcept { return n_; }
  bool exact() const noexcept { return exact_; }
  const std::vector<GroupElement>& window() const noexcept { return window_; }
  /// xi mod 1, block-major.
  const std::vector<double>& base() const noexcept { return base_; }

  /// Position of g in the window, or window().size() if absent.
  std::size_t window_index(const GroupElement& g) const;
  double value(std::size_t x, std::size_t l, std::size_t w) const;
  /// phi(x)(.)(g) as n values.
  std::vector<double> at(std::size_t x, std::size_t w) const;

  friend TorusMicrostate microstate_from_vector(const SoficLevel& level,
                                                std::span<const double> xi,
                                                std::size_t n,
                                                std::vector<GroupElement> window);

 private:
  std::size_t level_index_ = 0;
  std::size_t degree_ = 0;
  std::size_t n_ = 0;
  bool exact_ = true;
  std::vector<double> base_;
  std::vector<GroupElement> window_;
  std::vector<Permutation> inverse_;  // sigma(g)^-1 per window element
  std::vector<Permutation> forward_;  // sigma(g) per window element
};

TorusMicrostate microstate_from_vector(const SoficLevel& level,
                                       std::span<const double> xi, std::size_t n,
                                       std::vector<GroupElement> window);

struct EquivarianceDefect {
  GroupElement g;
  double defect = 0.0;
};

struct MembershipReport {
  std::vector<EquivarianceDefect> defects;
  /// (1/d) sum_x |<phi(x), b_k>|^2 per relator.
  std::vector<double> smallness;
  double delta = 0.0;
  bool equivariant = true;
  bool small = true;
  bool member = true;
};

/// Checks rho_2(phi o sigma(g), g phi) < delta for g in F and the relator
/// smallness bound < delta^2 for the first m relators.
MembershipReport map_membership(const TorusMicrostate& ms, const SoficLevel& level,
                                const PseudometricSpec& metric,
                                const std::vector<GroupElement>& F, double delta,
                                const ModulePresentation& pres, std::size_t m);

/// Rows (microstate, level, point, coordinate, value); the point is the site
/// x and the coordinate index is l * |window| + w.
void write_microstates_csv(std::ostream& os, const std::vector<TorusMicrostate>& set);

}  // namespace soficrank
