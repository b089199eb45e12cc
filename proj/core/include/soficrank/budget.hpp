#pragma once

#include <cstddef>
#include <string>

namespace soficrank {

/// Default cap on dense allocations, overridable with SOFICRANK_BUDGET_MB.
inline constexpr std::size_t kDefaultBudgetMb = 2048;
/// Largest level degree the dense eigen path accepts.
inline constexpr std::size_t kDenseDegreeLimit = 65536;

std::size_t dense_budget_bytes();

/// Bytes for a dense double matrix of the given shape.
std::size_t dense_bytes(std::size_t rows, std::size_t cols);

/// Throws BudgetExceeded naming `what` when a rows x cols dense double
/// matrix does not fit the budget or the degree exceeds the dense limit.
void require_dense(std::size_t rows, std::size_t cols, std::size_t degree,
                   const std::string& what);

bool fits_dense(std::size_t rows, std::size_t cols, std::size_t degree);

}  // namespace soficrank
