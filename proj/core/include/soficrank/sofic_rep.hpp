#pragma once

// Matrix representations sigma_i : M_{m,n}(Z(Gamma)) -> M_{m d, n d}(Z).
//
// Block (j, k) of sigma_i(f) is sum_g f_jk^(g) P(sigma_i(g)) where
// P(s) e_x = e_{s(x)}, so P(s)[s(x), x] = 1 and P is multiplicative.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "soficrank/group_ring.hpp"
#include "soficrank/sofic_level.hpp"
#include "soficrank/sparse.hpp"

namespace soficrank {

/// Normalization of ||.||_2 on block matrices: divide the squared Frobenius
/// norm by (column blocks) * d, i.e. tr (x) Tr with tr = Tr / d.
inline constexpr const char* kHsConvention = "frobenius^2/(n*d)";

struct SoficMatrix {
  std::size_t level_index = 0;
  std::size_t degree = 0;
  std::size_t block_rows = 0;  // m
  std::size_t block_cols = 0;  // n
  SparseIntMatrix entries;     // (m d) x (n d)
  std::string convention = kHsConvention;
};

/// sigma_i(f). Integer exact; throws NotExpressible or NumericalFailure if a
/// coefficient does not fit in int64.
SoficMatrix represent(const SoficLevel& level, const GroupRingMatrix& f);

/// sqrt(frobenius^2 / (n d)).
double normalized_hs_norm(const SoficMatrix& a);

/// transpose(A) * A, (n d) x (n d), exact.
SoficMatrix gram(const SoficMatrix& a);

/// Sparse triplet export of the entries.
void export_triplets(std::ostream& os, const SoficMatrix& a);

}  // namespace soficrank
