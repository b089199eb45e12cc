#include "soficrank/budget.hpp"

#include <cstdlib>
#include <limits>

#include "soficrank/errors.hpp"

namespace soficrank {

std::size_t dense_budget_bytes() {
  std::size_t mb = kDefaultBudgetMb;
  if (const char* env = std::getenv("SOFICRANK_BUDGET_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) mb = static_cast<std::size_t>(v);
  }
  return mb * 1024 * 1024;
}

std::size_t dense_bytes(std::size_t rows, std::size_t cols) {
  if (rows != 0 && cols > std::numeric_limits<std::size_t>::max() / 8 / rows) {
    return std::numeric_limits<std::size_t>::max();
  }
  return rows * cols * 8;
}

bool fits_dense(std::size_t rows, std::size_t cols, std::size_t degree) {
  return degree <= kDenseDegreeLimit && dense_bytes(rows, cols) <= dense_budget_bytes();
}

void require_dense(std::size_t rows, std::size_t cols, std::size_t degree,
                   const std::string& what) {
  if (degree > kDenseDegreeLimit) {
    throw BudgetExceeded(what + ": degree " + std::to_string(degree) +
                         " exceeds the dense limit " + std::to_string(kDenseDegreeLimit) +
                         " (use the iterative path)");
  }
  if (dense_bytes(rows, cols) > dense_budget_bytes()) {
    throw BudgetExceeded(what + ": dense " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " matrix exceeds SOFICRANK_BUDGET_MB");
  }
}

}  // namespace soficrank
