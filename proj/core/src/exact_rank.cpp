#include "soficrank/exact_rank.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/integer/common_factor.hpp>

#include "soficrank/errors.hpp"

namespace soficrank {

namespace {

// Machine integers with overflow detection; Integer is the exact fallback.
struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}

std::int64_t gcd_of(std::int64_t a, std::int64_t b) {
  if (a == std::numeric_limits<std::int64_t>::min() ||
      b == std::numeric_limits<std::int64_t>::min()) {
    throw Overflow{};
  }
  return std::gcd(a, b);
}
Integer gcd_of(const Integer& a, const Integer& b) { return boost::integer::gcd(a, b); }

std::int64_t mul(std::int64_t a, std::int64_t b) { return checked_mul(a, b); }
Integer mul(const Integer& a, const Integer& b) { return a * b; }
std::int64_t sub(std::int64_t a, std::int64_t b) { return checked_sub(a, b); }
Integer sub(const Integer& a, const Integer& b) { return a - b; }

template <class T>
using Row = std::vector<std::pair<std::size_t, T>>;  // sorted by column

template <class T>
void normalize(Row<T>& r) {
  T g = 0;
  for (const auto& [c, v] : r) {
    g = gcd_of(g, v);
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& [c, v] : r) v /= g;
  }
}

// a * row - b * pivot, dropping zeros.
template <class T>
Row<T> combine(const T& a, const Row<T>& row, const T& b, const Row<T>& pivot) {
  Row<T> out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < row.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      out.emplace_back(row[i].first, mul(a, row[i].second));
      ++i;
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      out.emplace_back(pivot[j].first, sub(T(0), mul(b, pivot[j].second)));
      ++j;
    } else {
      T v = sub(mul(a, row[i].second), mul(b, pivot[j].second));
      if (v != 0) out.emplace_back(row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class T>
std::size_t eliminate(const SparseIntMatrix& m) {
  std::vector<Row<T>> rows;
  rows.reserve(m.rows());
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_index();
  const auto& vals = m.values();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (rp[r] == rp[r + 1]) continue;
    Row<T> row;
    for (std::size_t q = rp[r]; q < rp[r + 1]; ++q) row.emplace_back(ci[q], T(vals[q]));
    rows.push_back(std::move(row));
  }
  // Sparse rows first keeps fill-in down.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row<T>& a, const Row<T>& b) { return a.size() < b.size(); });

  std::unordered_map<std::size_t, Row<T>> pivots;  // leading column -> row
  for (auto& row : rows) {
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) {
        normalize(row);
        const std::size_t lead = row.front().first;
        pivots.emplace(lead, std::move(row));
        break;
      }
      const Row<T>& pivot = it->second;
      T a = pivot.front().second;
      T b = row.front().second;
      const T g = gcd_of(a, b);
      a /= g;
      b /= g;
      row = combine(a, row, b, pivot);
      normalize(row);
    }
  }
  return pivots.size();
}

}  // namespace

std::size_t exact_rank(const SparseIntMatrix& m) {
  try {
    return eliminate<std::int64_t>(m);
  } catch (const Overflow&) {
    return eliminate<Integer>(m);
  }
}

std::size_t exact_kernel_dimension(const SoficMatrix& a) {
  if (a.degree > kExactRankDegreeLimit) {
    throw BudgetExceeded("exact rank path is limited to degree <= " +
                         std::to_string(kExactRankDegreeLimit) + " (got " +
                         std::to_string(a.degree) + ")");
  }
  return a.entries.cols() - exact_rank(a.entries);
}

double exact_kernel_fraction(const SoficMatrix& a) {
  if (a.degree == 0) return 0.0;
  return static_cast<double>(exact_kernel_dimension(a)) / static_cast<double>(a.degree);
}

}  // namespace soficrank
