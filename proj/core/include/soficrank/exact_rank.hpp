#pragma once

#include <cstddef>

#include "soficrank/sofic_rep.hpp"
#include "soficrank/sparse.hpp"

namespace soficrank {

/// Largest degree accepted by the exact verification path.
inline constexpr std::size_t kExactRankDegreeLimit = 2048;

/// Rank over Q by fraction-free sparse elimination with big integers.
std::size_t exact_rank(const SparseIntMatrix& m);

/// (n d - rank sigma_i(f)) / d, exactly. Throws BudgetExceeded above
/// kExactRankDegreeLimit.
double exact_kernel_fraction(const SoficMatrix& a);

/// Kernel dimension n d - rank, as an integer.
std::size_t exact_kernel_dimension(const SoficMatrix& a);

}  // namespace soficrank
