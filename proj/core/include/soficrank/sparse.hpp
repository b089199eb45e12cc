#pragma once

// Compressed-row integer matrices. Arithmetic is exact and checked: any
// int64 overflow throws instead of wrapping.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "soficrank/group_ring.hpp"

namespace soficrank {

struct Triplet {
  std::size_t row;
  std::size_t col;
  std::int64_t value;
};

class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols);

  /// Duplicates are summed; zero results are dropped.
  static SparseIntMatrix from_triplets(std::size_t rows, std::size_t cols,
                                       std::vector<Triplet> triplets);
  static SparseIntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_index() const noexcept { return col_idx_; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  std::int64_t at(std::size_t r, std::size_t c) const;
  std::vector<Triplet> triplets() const;

  SparseIntMatrix transpose() const;
  Integer trace() const;
  /// Sum of squared entries.
  Integer frobenius_squared() const;
  std::size_t max_row_nnz() const;

  Eigen::MatrixXd to_dense() const;
  Eigen::SparseMatrix<double> to_eigen() const;
  void apply(std::span<const double> x, std::span<double> y) const;

  friend SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ &&
           a.col_idx_ == b.col_idx_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<std::int64_t> values_;
};

SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b);

/// One "row col value" line per nonzero, 0-based, preceded by a
/// "% rows cols nnz" header line.
void write_triplets(std::ostream& os, const SparseIntMatrix& m);

}  // namespace soficrank
