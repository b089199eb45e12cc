#pragma once

// Group rings R(Gamma) and matrices over them.
//
// Elements are finitely supported maps Gamma -> R stored in shortlex order
// with no explicit zeros. Integer coefficients are arbitrary precision, so
// products never overflow.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "soficrank/errors.hpp"
#include "soficrank/group.hpp"

namespace soficrank {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Coefficient kinds: exact integers, exact rationals, or doubles.
enum class CoefficientKind { Integer, Rational, Real };

template <class Coeff>
struct CoefficientTraits;

template <>
struct CoefficientTraits<Integer> {
  static constexpr CoefficientKind kind = CoefficientKind::Integer;
  static Integer conj(const Integer& c) { return c; }
  static std::string str(const Integer& c) { return c.str(); }
};

template <>
struct CoefficientTraits<Rational> {
  static constexpr CoefficientKind kind = CoefficientKind::Rational;
  static Rational conj(const Rational& c) { return c; }
  static std::string str(const Rational& c) { return c.str(); }
};

template <>
struct CoefficientTraits<double> {
  static constexpr CoefficientKind kind = CoefficientKind::Real;
  static double conj(double c) { return c; }
  static std::string str(double c);
};

template <class Coeff>
class BasicGroupRingElement {
 public:
  using coefficient_type = Coeff;
  using Terms = std::map<Word, Coeff, ShortLex>;

  explicit BasicGroupRingElement(GroupPtr group) : group_(std::move(group)) {
    if (!group_) throw ValidationError("group ring element without a group");
  }

  static BasicGroupRingElement zero(GroupPtr group) {
    return BasicGroupRingElement(std::move(group));
  }
  static BasicGroupRingElement one(GroupPtr group) {
    BasicGroupRingElement out(group);
    out.add_term(group->identity(), Coeff(1));
    return out;
  }
  static BasicGroupRingElement monomial(const GroupElement& g, Coeff c = Coeff(1)) {
    BasicGroupRingElement out(g.group());
    out.add_term(g.word(), std::move(c));
    return out;
  }

  const GroupPtr& group() const noexcept { return group_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t support_size() const noexcept { return terms_.size(); }

  Coeff coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Coeff(0) : it->second;
  }
  Coeff coefficient(const GroupElement& g) const { return coefficient(g.word()); }

  /// Adds c at w; cancelled coefficients are erased.
  void add_term(const Word& w, const Coeff& c) {
    if (c == Coeff(0)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff(0)) terms_.erase(it);
    }
  }

  BasicGroupRingElement& operator+=(const BasicGroupRingElement& o) {
    check_group(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  BasicGroupRingElement& operator-=(const BasicGroupRingElement& o) {
    check_group(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  BasicGroupRingElement& operator*=(const Coeff& s) {
    if (s == Coeff(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend BasicGroupRingElement operator+(BasicGroupRingElement a,
                                         const BasicGroupRingElement& b) {
    return a += b;
  }
  friend BasicGroupRingElement operator-(BasicGroupRingElement a,
                                         const BasicGroupRingElement& b) {
    return a -= b;
  }
  friend BasicGroupRingElement operator-(BasicGroupRingElement a) {
    for (auto& [w, c] : a.terms_) c = -c;
    return a;
  }
  friend BasicGroupRingElement operator*(BasicGroupRingElement a, const Coeff& s) {
    return a *= s;
  }
  friend BasicGroupRingElement operator*(const BasicGroupRingElement& a,
                                         const BasicGroupRingElement& b) {
    return ring_mul(a, b);
  }
  friend bool operator==(const BasicGroupRingElement& a,
                         const BasicGroupRingElement& b) {
    return same_group(a.group_, b.group_) && a.terms_ == b.terms_;
  }

  /// Convolution: (xy)^(g) = sum_h x^(h) y^(h^{-1}g).
  friend BasicGroupRingElement ring_mul(const BasicGroupRingElement& x,
                                        const BasicGroupRingElement& y) {
    x.check_group(y);
    BasicGroupRingElement out(x.group_);
    for (const auto& [g, a] : x.terms_) {
      for (const auto& [h, b] : y.terms_) {
        out.add_term(x.group_->multiply(g, h), a * b);
      }
    }
    return out;
  }

  /// (sum a_g g)* = sum conj(a_{g^{-1}}) g.
  BasicGroupRingElement star() const {
    BasicGroupRingElement out(group_);
    for (const auto& [w, c] : terms_) {
      out.terms_.emplace(group_->inverse(w), CoefficientTraits<Coeff>::conj(c));
    }
    return out;
  }

  /// Largest word length in the support (0 for the zero element).
  std::int64_t diameter() const {
    std::int64_t d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, group_->length(w));
    return d;
  }

  /// Canonical text, e.g. "2*e - x^-1 + x^2". Shortlex term order.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      const bool negative = c < Coeff(0);
      const Coeff mag = negative ? Coeff(-c) : c;
      const bool unit = mag == Coeff(1);
      const bool identity = group_->is_identity(w);
      std::string body;
      if (identity) {
        body = CoefficientTraits<Coeff>::str(mag);
      } else if (unit) {
        body = group_->format(w);
      } else {
        body = CoefficientTraits<Coeff>::str(mag) + "*" + group_->format(w);
      }
      if (first) {
        out += negative ? "-" + body : body;
      } else {
        out += negative ? " - " + body : " + " + body;
      }
      first = false;
    }
    return out;
  }

 private:
  void check_group(const BasicGroupRingElement& o) const {
    if (!same_group(group_, o.group_)) {
      throw GroupMismatch("group ring operands over " + group_->describe() +
                          " and " + o.group_->describe());
    }
  }

  GroupPtr group_;
  Terms terms_;
};

template <class Coeff>
BasicGroupRingElement<Coeff> star(const BasicGroupRingElement<Coeff>& x) {
  return x.star();
}

/// Dense m x n matrix of group ring elements, row-major.
template <class Coeff>
class BasicGroupRingMatrix {
 public:
  using Element = BasicGroupRingElement<Coeff>;

  BasicGroupRingMatrix(GroupPtr group, std::size_t rows, std::size_t cols)
      : group_(std::move(group)), rows_(rows), cols_(cols) {
    entries_.assign(rows * cols, Element(group_));
  }

  static BasicGroupRingMatrix identity(GroupPtr group, std::size_t n) {
    BasicGroupRingMatrix out(group, n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = Element::one(group);
    return out;
  }

  /// 1x1 matrix holding `x`.
  static BasicGroupRingMatrix scalar(const Element& x) {
    BasicGroupRingMatrix out(x.group(), 1, 1);
    out(0, 0) = x;
    return out;
  }

  /// Rows given as lists of elements; all rows must have equal length.
  static BasicGroupRingMatrix from_rows(GroupPtr group,
                                        const std::vector<std::vector<Element>>& rows,
                                        std::size_t cols_if_empty = 0) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows[0].size() : cols_if_empty;
    BasicGroupRingMatrix out(group, m, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != n) {
        throw ValidationError("ragged group ring matrix rows");
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (!same_group(rows[i][j].group(), group)) {
          throw GroupMismatch("matrix entry over a different group");
        }
        out(i, j) = rows[i][j];
      }
    }
    return out;
  }

  const GroupPtr& group() const noexcept { return group_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  bool is_zero() const {
    for (const auto& e : entries_) {
      if (!e.is_zero()) return false;
    }
    return true;
  }

  /// Total number of (entry, group element) terms.
  std::size_t support_size() const {
    std::size_t s = 0;
    for (const auto& e : entries_) s += e.support_size();
    return s;
  }

  std::int64_t diameter() const {
    std::int64_t d = 0;
    for (const auto& e : entries_) d = std::max(d, e.diameter());
    return d;
  }

  /// Conjugate transpose: (f*)_{jk} = (f_{kj})*.
  BasicGroupRingMatrix star() const {
    BasicGroupRingMatrix out(group_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).star();
    }
    return out;
  }

  friend BasicGroupRingMatrix operator*(const BasicGroupRingMatrix& a,
                                        const BasicGroupRingMatrix& b) {
    if (!same_group(a.group_, b.group_)) {
      throw GroupMismatch("matrix product over different groups");
    }
    if (a.cols_ != b.rows_) {
      throw ValidationError("matrix product dimension mismatch");
    }
    BasicGroupRingMatrix out(a.group_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Element& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j).is_zero()) continue;
          out(i, j) += ring_mul(aik, b(k, j));
        }
      }
    }
    return out;
  }

  friend BasicGroupRingMatrix operator+(BasicGroupRingMatrix a,
                                        const BasicGroupRingMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw ValidationError("matrix sum dimension mismatch");
    }
    for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] += b.entries_[i];
    return a;
  }

  friend bool operator==(const BasicGroupRingMatrix& a,
                         const BasicGroupRingMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) out += "; ";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out += ", ";
        out += (*this)(i, j).str();
      }
    }
    return out + "]";
  }

 private:
  GroupPtr group_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> entries_;
};

using GroupRingElement = BasicGroupRingElement<Integer>;
using GroupRingMatrix = BasicGroupRingMatrix<Integer>;
using RationalGroupRingElement = BasicGroupRingElement<Rational>;
using RealGroupRingElement = BasicGroupRingElement<double>;

template <class Coeff>
BasicGroupRingMatrix<Coeff> star(const BasicGroupRingMatrix<Coeff>& f) {
  return f.star();
}

/// The row [x_1 ... x_n] with the same, unconjugated entries.
template <class Coeff>
BasicGroupRingMatrix<Coeff> partial_adjoint(
    const std::vector<BasicGroupRingElement<Coeff>>& column, GroupPtr group) {
  BasicGroupRingMatrix<Coeff> out(group, 1, column.size());
  for (std::size_t j = 0; j < column.size(); ++j) {
    if (!same_group(column[j].group(), group)) {
      throw GroupMismatch("column entry over a different group");
    }
    out(0, j) = column[j];
  }
  return out;
}

/// (f*f)^k for k = 0..kmax (index k of the result).
template <class Coeff>
std::vector<BasicGroupRingMatrix<Coeff>> gram_powers(
    const BasicGroupRingMatrix<Coeff>& f, std::size_t kmax) {
  const auto g = f.star() * f;
  std::vector<BasicGroupRingMatrix<Coeff>> out;
  out.push_back(BasicGroupRingMatrix<Coeff>::identity(f.group(), f.cols()));
  for (std::size_t k = 1; k <= kmax; ++k) out.push_back(out.back() * g);
  return out;
}

/// Sum of the identity coefficients on the diagonal.
template <class Coeff>
Coeff identity_trace(const BasicGroupRingMatrix<Coeff>& h) {
  Coeff t(0);
  const Word e = h.group()->identity();
  for (std::size_t j = 0; j < std::min(h.rows(), h.cols()); ++j) {
    t += h(j, j).coefficient(e);
  }
  return t;
}

/// tau (x) Tr((f*f)^k): exact, nonnegative.
template <class Coeff>
Coeff trace_moment(const BasicGroupRingMatrix<Coeff>& f, std::size_t k) {
  return identity_trace(gram_powers(f, k).back());
}

/// A = Z(Gamma)^n / B with B generated by the relators b_j, each a column of
/// n elements. Only finite prefixes of a generating sequence are stored.
class ModulePresentation {
 public:
  ModulePresentation(GroupPtr group, std::size_t rank,
                     std::vector<std::vector<GroupRingElement>> relators = {});

  /// Free module of rank n.
  static ModulePresentation free_module(GroupPtr group, std::size_t rank) {
    return ModulePresentation(std::move(group), rank);
  }

  const GroupPtr& group() const noexcept { return group_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t relator_count() const noexcept { return relators_.size(); }
  const std::vector<std::vector<GroupRingElement>>& relators() const noexcept {
    return relators_;
  }

  /// The k x n matrix whose rows are the partial adjoints of b_1..b_k.
  GroupRingMatrix relator_matrix(std::size_t k) const;
  GroupRingMatrix relator_matrix() const { return relator_matrix(relators_.size()); }

 private:
  GroupPtr group_;
  std::size_t rank_;
  std::vector<std::vector<GroupRingElement>> relators_;
};

}  // namespace soficrank
