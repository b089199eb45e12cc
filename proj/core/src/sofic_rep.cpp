#include "soficrank/sofic_rep.hpp"

#include <cmath>
#include <limits>

#include "soficrank/budget.hpp"
#include "soficrank/errors.hpp"

namespace soficrank {

SoficMatrix represent(const SoficLevel& level, const GroupRingMatrix& f) {
  if (!same_group(level.group(), f.group())) {
    throw GroupMismatch("representing a matrix over " + f.group()->describe() +
                        " at a level of " + level.group()->describe());
  }
  const std::size_t d = level.degree();
  SoficMatrix out;
  out.level_index = level.index();
  out.degree = d;
  out.block_rows = f.rows();
  out.block_cols = f.cols();
  std::vector<Triplet> triplets;
  triplets.reserve(f.support_size() * d);
  std::map<Word, Permutation, ShortLex> cache;
  for (std::size_t j = 0; j < f.rows(); ++j) {
    for (std::size_t k = 0; k < f.cols(); ++k) {
      for (const auto& [w, c] : f(j, k).terms()) {
        if (c > std::numeric_limits<std::int64_t>::max() ||
            c < std::numeric_limits<std::int64_t>::min()) {
          throw NumericalFailure("coefficient " + c.str() + " does not fit in int64");
        }
        const auto value = static_cast<std::int64_t>(c);
        auto it = cache.find(w);
        if (it == cache.end()) it = cache.emplace(w, level.permutation(w)).first;
        const Permutation& p = it->second;
        for (std::size_t x = 0; x < d; ++x) {
          triplets.push_back({j * d + p[x], k * d + x, value});
        }
      }
    }
  }
  out.entries = SparseIntMatrix::from_triplets(f.rows() * d, f.cols() * d,
                                               std::move(triplets));
  return out;
}

double normalized_hs_norm(const SoficMatrix& a) {
  if (a.block_cols == 0 || a.degree == 0) return 0.0;
  const double fro = a.entries.frobenius_squared().convert_to<double>();
  return std::sqrt(fro / static_cast<double>(a.block_cols * a.degree));
}

SoficMatrix gram(const SoficMatrix& a) {
  // Upper bound on nnz(A^T A): sum over rows of (row nnz)^2.
  std::size_t predicted = 0;
  const auto& rp = a.entries.row_ptr();
  for (std::size_t r = 0; r + 1 < rp.size(); ++r) {
    const std::size_t k = rp[r + 1] - rp[r];
    predicted += k * k;
  }
  if (predicted * 16 > dense_budget_bytes()) {
    throw BudgetExceeded("gram: predicted " + std::to_string(predicted) +
                         " nonzeros exceed SOFICRANK_BUDGET_MB");
  }
  SoficMatrix out;
  out.level_index = a.level_index;
  out.degree = a.degree;
  out.block_rows = a.block_cols;
  out.block_cols = a.block_cols;
  out.entries = multiply(a.entries.transpose(), a.entries);
  out.convention = a.convention;
  return out;
}

void export_triplets(std::ostream& os, const SoficMatrix& a) {
  write_triplets(os, a.entries);
}

}  // namespace soficrank
