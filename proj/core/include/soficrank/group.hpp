#pragma once

// Finitely generated groups with computable normal forms.
//
// Elements are encoded as a flat `Word` whose meaning depends on the group:
//   FreeAbelian(d)  exponent vector of length d
//   Free(r)         reduced word, letter +(k+1) for generator k, -(k+1) for its
//                   inverse
//   Finite          a single index into the multiplication table (0 = e)
//   DirectProduct   concatenation of [length, factor word...] per factor
// Normal forms are unique, so Word equality is group-element equality.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace soficrank {

using Word = std::vector<std::int64_t>;

/// Shortlex order on words: shorter first, then lexicographic. Used for
/// every ordered container keyed by group elements, so supports serialize
/// identically across runs.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

enum class GroupKind { FreeAbelian, Free, Finite, DirectProduct };

class GroupSpec;
using GroupPtr = std::shared_ptr<const GroupSpec>;

class GroupSpec {
 public:
  /// Z^d. Default labels are x, y, z, w for d <= 4 and x1..xd otherwise.
  static GroupPtr free_abelian(int rank, std::vector<std::string> labels = {});
  /// F_r. Default labels are a, b, c, ... for r <= 26.
  static GroupPtr free(int rank, std::vector<std::string> labels = {});
  /// A finite group from its multiplication table, table[i][j] = i*j.
  /// Element 0 must be the identity. `labels` name elements 1..k-1 and
  /// default to g1..g{k-1}.
  static GroupPtr finite(std::vector<std::vector<int>> table,
                         std::vector<std::string> labels = {});
  /// Direct product; generator labels of the factors must be distinct.
  static GroupPtr direct_product(std::vector<GroupPtr> factors);

  GroupKind kind() const noexcept { return kind_; }
  /// d for Z^d, r for F_r, the order for a finite group, the factor count
  /// for a product.
  int rank() const noexcept { return rank_; }
  const std::vector<std::string>& generators() const noexcept {
    return labels_;
  }
  std::size_t generator_count() const noexcept { return labels_.size(); }
  const std::vector<GroupPtr>& factors() const noexcept { return factors_; }
  const std::vector<std::vector<int>>& table() const noexcept {
    return table_;
  }

  Word identity() const;
  Word generator(std::size_t index) const;
  Word multiply(const Word& a, const Word& b) const;
  Word inverse(const Word& a) const;
  Word power(const Word& a, std::int64_t exponent) const;
  bool is_identity(const Word& a) const;
  /// True iff `a` is a normal form of this group.
  bool is_normal_form(const Word& a) const;

  /// Word length with respect to the generators (l1 norm on Z^d, reduced
  /// length on F_r, 0/1 for finite groups, sum over product factors).
  std::int64_t length(const Word& a) const;

  /// Component words of a direct-product element.
  std::vector<Word> split(const Word& a) const;
  Word join(const std::vector<Word>& parts) const;

  /// Canonical text form, e.g. "x^2*y^-1", "a*b^-1*a", "e".
  std::string format(const Word& a) const;
  std::string describe() const;

  /// Structural equality: same kind, rank, labels, table and factors.
  bool same_as(const GroupSpec& other) const;

 private:
  GroupSpec() = default;

  GroupKind kind_ = GroupKind::FreeAbelian;
  int rank_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> table_;
  std::vector<int> finite_inverse_;
  std::vector<GroupPtr> factors_;
  // For products: generator index -> (factor, generator within factor).
  std::vector<std::pair<std::size_t, std::size_t>> generator_owner_;
};

bool same_group(const GroupPtr& a, const GroupPtr& b);

/// A group element bound to its group. Value type; comparison is by normal
/// form in shortlex order and assumes both operands share a group.
class GroupElement {
 public:
  GroupElement(GroupPtr group, Word word);

  static GroupElement identity(GroupPtr group);
  static GroupElement generator(GroupPtr group, std::size_t index);

  const GroupPtr& group() const noexcept { return group_; }
  const Word& word() const noexcept { return word_; }

  GroupElement inverse() const;
  bool is_identity() const { return group_->is_identity(word_); }
  std::string str() const { return group_->format(word_); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.word_ == b.word_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return ShortLex{}(a.word_, b.word_);
  }

 private:
  GroupPtr group_;
  Word word_;
};

/// Normal form of g*h. Throws GroupMismatch if the groups differ.
GroupElement mul(const GroupElement& g, const GroupElement& h);
inline GroupElement operator*(const GroupElement& g, const GroupElement& h) {
  return mul(g, h);
}

}  // namespace soficrank
