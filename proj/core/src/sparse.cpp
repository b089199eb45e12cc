#include "soficrank/sparse.hpp"

#include <algorithm>
#include <ostream>

#include "soficrank/errors.hpp"

namespace soficrank {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw NumericalFailure("int64 overflow in sparse sum");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw NumericalFailure("int64 overflow in sparse product");
  return r;
}

}  // namespace

SparseIntMatrix::SparseIntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseIntMatrix SparseIntMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                               std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw ValidationError("triplet index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseIntMatrix m(rows, cols);
  std::size_t i = 0;
  while (i < triplets.size()) {
    std::size_t j = i;
    std::int64_t sum = 0;
    while (j < triplets.size() && triplets[j].row == triplets[i].row &&
           triplets[j].col == triplets[i].col) {
      sum = checked_add(sum, triplets[j].value);
      ++j;
    }
    if (sum != 0) {
      m.col_idx_.push_back(triplets[i].col);
      m.values_.push_back(sum);
      ++m.row_ptr_[triplets[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseIntMatrix SparseIntMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1});
  return from_triplets(n, n, std::move(t));
}

std::int64_t SparseIntMatrix::at(std::size_t r, std::size_t c) const {
  const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return 0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<Triplet> SparseIntMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      out.push_back({r, col_idx_[p], values_[p]});
    }
  }
  return out;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  auto t = triplets();
  for (auto& x : t) std::swap(x.row, x.col);
  return from_triplets(cols_, rows_, std::move(t));
}

Integer SparseIntMatrix::trace() const {
  Integer t = 0;
  for (std::size_t r = 0; r < std::min(rows_, cols_); ++r) t += at(r, r);
  return t;
}

Integer SparseIntMatrix::frobenius_squared() const {
  Integer s = 0;
  for (auto v : values_) s += Integer(v) * v;
  return s;
}

std::size_t SparseIntMatrix::max_row_nnz() const {
  std::size_t m = 0;
  for (std::size_t r = 0; r < rows_; ++r) m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
  return m;
}

Eigen::MatrixXd SparseIntMatrix::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                              static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col_idx_[p])) =
          static_cast<double>(values_[p]);
    }
  }
  return out;
}

Eigen::SparseMatrix<double> SparseIntMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      t.emplace_back(static_cast<int>(r), static_cast<int>(col_idx_[p]),
                     static_cast<double>(values_[p]));
    }
  }
  Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(rows_),
                                  static_cast<Eigen::Index>(cols_));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void SparseIntMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw ValidationError("matrix-vector dimension mismatch");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      s += static_cast<double>(values_[p]) * x[col_idx_[p]];
    }
    y[r] = s;
  }
}

SparseIntMatrix multiply(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols_ != b.rows_) throw ValidationError("sparse product dimension mismatch");
  SparseIntMatrix out(a.rows_, b.cols_);
  std::vector<std::int64_t> acc(b.cols_, 0);
  std::vector<char> touched(b.cols_, 0);
  std::vector<std::size_t> cols;
  for (std::size_t r = 0; r < a.rows_; ++r) {
    cols.clear();
    for (std::size_t p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
      const std::size_t k = a.col_idx_[p];
      const std::int64_t av = a.values_[p];
      for (std::size_t q = b.row_ptr_[k]; q < b.row_ptr_[k + 1]; ++q) {
        const std::size_t c = b.col_idx_[q];
        if (!touched[c]) {
          touched[c] = 1;
          cols.push_back(c);
        }
        acc[c] = checked_add(acc[c], checked_mul(av, b.values_[q]));
      }
    }
    std::sort(cols.begin(), cols.end());
    for (auto c : cols) {
      if (acc[c] != 0) {
        out.col_idx_.push_back(c);
        out.values_.push_back(acc[c]);
      }
      acc[c] = 0;
      touched[c] = 0;
    }
    out.row_ptr_[r + 1] = out.values_.size();
  }
  return out;
}

void write_triplets(std::ostream& os, const SparseIntMatrix& m) {
  os << "% " << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const auto& t : m.triplets()) {
    os << t.row << ' ' << t.col << ' ' << t.value << '\n';
  }
}

}  // namespace soficrank
