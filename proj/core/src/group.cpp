#include "soficrank/group.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "soficrank/errors.hpp"

namespace soficrank {

namespace {

std::vector<std::string> default_abelian_labels(int rank) {
  static const char* kSmall[] = {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (int i = 0; i < rank; ++i) {
    out.push_back(rank <= 4 ? std::string(kSmall[i])
                            : "x" + std::to_string(i + 1));
  }
  return out;
}

std::vector<std::string> default_free_labels(int rank) {
  std::vector<std::string> out;
  for (int i = 0; i < rank; ++i) {
    out.push_back(rank <= 26 ? std::string(1, static_cast<char>('a' + i))
                             : "a" + std::to_string(i + 1));
  }
  return out;
}

void check_labels(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty() || !(std::isalpha(static_cast<unsigned char>(l[0])) ||
                       l[0] == '_')) {
      throw ValidationError("generator label '" + l +
                            "' must start with a letter or underscore");
    }
    for (char c : l) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
        throw ValidationError("generator label '" + l +
                              "' contains an invalid character");
      }
    }
    if (l == "e") {
      throw ValidationError("'e' is reserved for the identity");
    }
    if (!seen.insert(l).second) {
      throw ValidationError("duplicate generator label '" + l + "'");
    }
  }
}

std::string power_text(const std::string& label, std::int64_t e) {
  return e == 1 ? label : label + "^" + std::to_string(e);
}

}  // namespace

GroupPtr GroupSpec::free_abelian(int rank, std::vector<std::string> labels) {
  if (rank < 1) throw ValidationError("FreeAbelian rank must be >= 1");
  if (labels.empty()) labels = default_abelian_labels(rank);
  if (static_cast<int>(labels.size()) != rank) {
    throw ValidationError("FreeAbelian needs one label per generator");
  }
  check_labels(labels);
  auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
  g->kind_ = GroupKind::FreeAbelian;
  g->rank_ = rank;
  g->labels_ = std::move(labels);
  return g;
}

GroupPtr GroupSpec::free(int rank, std::vector<std::string> labels) {
  if (rank < 1) throw ValidationError("Free rank must be >= 1");
  if (labels.empty()) labels = default_free_labels(rank);
  if (static_cast<int>(labels.size()) != rank) {
    throw ValidationError("Free needs one label per generator");
  }
  check_labels(labels);
  auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
  g->kind_ = GroupKind::Free;
  g->rank_ = rank;
  g->labels_ = std::move(labels);
  return g;
}

GroupPtr GroupSpec::finite(std::vector<std::vector<int>> table,
                           std::vector<std::string> labels) {
  const int k = static_cast<int>(table.size());
  if (k < 1) throw ValidationError("finite group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != k) {
      throw ValidationError("finite group table must be square");
    }
    for (int v : row) {
      if (v < 0 || v >= k) {
        throw ValidationError("finite group table entry out of range");
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (table[0][i] != i || table[i][0] != i) {
      throw ValidationError("element 0 of a finite group table must be e");
    }
  }
  // Associativity and inverses by enumeration.
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int c = 0; c < k; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw ValidationError("finite group table is not associative");
        }
      }
    }
  }
  std::vector<int> inverse(k, -1);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (table[a][b] == 0 && table[b][a] == 0) inverse[a] = b;
    }
    if (inverse[a] < 0) {
      throw ValidationError("finite group table: element " +
                            std::to_string(a) + " has no inverse");
    }
  }
  if (labels.empty()) {
    for (int i = 1; i < k; ++i) labels.push_back("g" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != k - 1) {
    throw ValidationError("finite group needs labels for elements 1..k-1");
  }
  check_labels(labels);
  auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
  g->kind_ = GroupKind::Finite;
  g->rank_ = k;
  g->labels_ = std::move(labels);
  g->table_ = std::move(table);
  g->finite_inverse_ = std::move(inverse);
  return g;
}

GroupPtr GroupSpec::direct_product(std::vector<GroupPtr> factors) {
  if (factors.empty()) throw ValidationError("direct product of no groups");
  auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
  g->kind_ = GroupKind::DirectProduct;
  g->rank_ = static_cast<int>(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (!factors[f]) throw ValidationError("null factor in direct product");
    for (std::size_t j = 0; j < factors[f]->generator_count(); ++j) {
      g->labels_.push_back(factors[f]->generators()[j]);
      g->generator_owner_.emplace_back(f, j);
    }
  }
  check_labels(g->labels_);
  g->factors_ = std::move(factors);
  return g;
}

Word GroupSpec::identity() const {
  switch (kind_) {
    case GroupKind::FreeAbelian:
      return Word(static_cast<std::size_t>(rank_), 0);
    case GroupKind::Free:
      return {};
    case GroupKind::Finite:
      return {0};
    case GroupKind::DirectProduct: {
      std::vector<Word> parts;
      for (const auto& f : factors_) parts.push_back(f->identity());
      return join(parts);
    }
  }
  return {};
}

Word GroupSpec::generator(std::size_t index) const {
  if (index >= labels_.size()) {
    throw ValidationError("generator index out of range");
  }
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Word w = identity();
      w[index] = 1;
      return w;
    }
    case GroupKind::Free:
      return {static_cast<std::int64_t>(index) + 1};
    case GroupKind::Finite:
      return {static_cast<std::int64_t>(index) + 1};
    case GroupKind::DirectProduct: {
      std::vector<Word> parts;
      for (const auto& f : factors_) parts.push_back(f->identity());
      const auto [owner, local] = generator_owner_[index];
      parts[owner] = factors_[owner]->generator(local);
      return join(parts);
    }
  }
  return {};
}

Word GroupSpec::multiply(const Word& a, const Word& b) const {
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Word out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
      return out;
    }
    case GroupKind::Free: {
      Word out = a;
      for (std::int64_t letter : b) {
        if (!out.empty() && out.back() == -letter) {
          out.pop_back();
        } else {
          out.push_back(letter);
        }
      }
      return out;
    }
    case GroupKind::Finite:
      return {table_[static_cast<std::size_t>(a[0])]
                    [static_cast<std::size_t>(b[0])]};
    case GroupKind::DirectProduct: {
      auto pa = split(a);
      auto pb = split(b);
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        pa[f] = factors_[f]->multiply(pa[f], pb[f]);
      }
      return join(pa);
    }
  }
  return {};
}

Word GroupSpec::inverse(const Word& a) const {
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      Word out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
      return out;
    }
    case GroupKind::Free: {
      Word out(a.rbegin(), a.rend());
      for (auto& l : out) l = -l;
      return out;
    }
    case GroupKind::Finite:
      return {finite_inverse_[static_cast<std::size_t>(a[0])]};
    case GroupKind::DirectProduct: {
      auto parts = split(a);
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        parts[f] = factors_[f]->inverse(parts[f]);
      }
      return join(parts);
    }
  }
  return {};
}

Word GroupSpec::power(const Word& a, std::int64_t exponent) const {
  Word base = exponent < 0 ? inverse(a) : a;
  std::uint64_t e = exponent < 0 ? static_cast<std::uint64_t>(-exponent)
                                 : static_cast<std::uint64_t>(exponent);
  Word out = identity();
  while (e > 0) {
    if (e & 1U) out = multiply(out, base);
    e >>= 1U;
    if (e > 0) base = multiply(base, base);
  }
  return out;
}

bool GroupSpec::is_identity(const Word& a) const { return a == identity(); }

bool GroupSpec::is_normal_form(const Word& a) const {
  switch (kind_) {
    case GroupKind::FreeAbelian:
      return static_cast<int>(a.size()) == rank_;
    case GroupKind::Free:
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0 || a[i] > rank_ || a[i] < -rank_) return false;
        if (i > 0 && a[i] == -a[i - 1]) return false;
      }
      return true;
    case GroupKind::Finite:
      return a.size() == 1 && a[0] >= 0 && a[0] < rank_;
    case GroupKind::DirectProduct: {
      std::size_t pos = 0;
      for (const auto& f : factors_) {
        if (pos >= a.size() || a[pos] < 0) return false;
        const auto len = static_cast<std::size_t>(a[pos]);
        if (pos + 1 + len > a.size()) return false;
        Word part(a.begin() + static_cast<std::ptrdiff_t>(pos + 1),
                  a.begin() + static_cast<std::ptrdiff_t>(pos + 1 + len));
        if (!f->is_normal_form(part)) return false;
        pos += 1 + len;
      }
      return pos == a.size();
    }
  }
  return false;
}

std::int64_t GroupSpec::length(const Word& a) const {
  switch (kind_) {
    case GroupKind::FreeAbelian: {
      std::int64_t s = 0;
      for (auto v : a) s += v < 0 ? -v : v;
      return s;
    }
    case GroupKind::Free:
      return static_cast<std::int64_t>(a.size());
    case GroupKind::Finite:
      return a[0] == 0 ? 0 : 1;
    case GroupKind::DirectProduct: {
      std::int64_t s = 0;
      auto parts = split(a);
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        s += factors_[f]->length(parts[f]);
      }
      return s;
    }
  }
  return 0;
}

std::vector<Word> GroupSpec::split(const Word& a) const {
  std::vector<Word> parts;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const auto len = static_cast<std::size_t>(a.at(pos));
    parts.emplace_back(a.begin() + static_cast<std::ptrdiff_t>(pos + 1),
                       a.begin() + static_cast<std::ptrdiff_t>(pos + 1 + len));
    pos += 1 + len;
  }
  return parts;
}

Word GroupSpec::join(const std::vector<Word>& parts) const {
  Word out;
  for (const auto& p : parts) {
    out.push_back(static_cast<std::int64_t>(p.size()));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::string GroupSpec::format(const Word& a) const {
  std::vector<std::string> pieces;
  switch (kind_) {
    case GroupKind::FreeAbelian:
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0) pieces.push_back(power_text(labels_[i], a[i]));
      }
      break;
    case GroupKind::Free: {
      std::size_t i = 0;
      while (i < a.size()) {
        const std::int64_t letter = a[i];
        std::size_t j = i;
        while (j < a.size() && a[j] == letter) ++j;
        const auto run = static_cast<std::int64_t>(j - i);
        const auto gen = static_cast<std::size_t>(letter > 0 ? letter : -letter) - 1;
        pieces.push_back(power_text(labels_[gen], letter > 0 ? run : -run));
        i = j;
      }
      break;
    }
    case GroupKind::Finite:
      if (a[0] != 0) pieces.push_back(labels_[static_cast<std::size_t>(a[0]) - 1]);
      break;
    case GroupKind::DirectProduct: {
      auto parts = split(a);
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        if (!factors_[f]->is_identity(parts[f])) {
          pieces.push_back(factors_[f]->format(parts[f]));
        }
      }
      break;
    }
  }
  if (pieces.empty()) return "e";
  std::string out = pieces[0];
  for (std::size_t i = 1; i < pieces.size(); ++i) out += "*" + pieces[i];
  return out;
}

std::string GroupSpec::describe() const {
  switch (kind_) {
    case GroupKind::FreeAbelian:
      return "Z^" + std::to_string(rank_);
    case GroupKind::Free:
      return "F_" + std::to_string(rank_);
    case GroupKind::Finite:
      return "finite(order " + std::to_string(rank_) + ")";
    case GroupKind::DirectProduct: {
      std::string out;
      for (std::size_t f = 0; f < factors_.size(); ++f) {
        if (f) out += " x ";
        out += factors_[f]->describe();
      }
      return out;
    }
  }
  return {};
}

bool GroupSpec::same_as(const GroupSpec& other) const {
  if (this == &other) return true;
  if (kind_ != other.kind_ || rank_ != other.rank_ ||
      labels_ != other.labels_ || table_ != other.table_ ||
      factors_.size() != other.factors_.size()) {
    return false;
  }
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (!factors_[f]->same_as(*other.factors_[f])) return false;
  }
  return true;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_as(*b);
}

GroupElement::GroupElement(GroupPtr group, Word word)
    : group_(std::move(group)), word_(std::move(word)) {
  if (!group_) throw ValidationError("group element without a group");
  if (!group_->is_normal_form(word_)) {
    throw ValidationError("word is not a normal form of " + group_->describe());
  }
}

GroupElement GroupElement::identity(GroupPtr group) {
  Word w = group->identity();
  return GroupElement(std::move(group), std::move(w));
}

GroupElement GroupElement::generator(GroupPtr group, std::size_t index) {
  Word w = group->generator(index);
  return GroupElement(std::move(group), std::move(w));
}

GroupElement GroupElement::inverse() const {
  return GroupElement(group_, group_->inverse(word_));
}

GroupElement mul(const GroupElement& g, const GroupElement& h) {
  if (!same_group(g.group(), h.group())) {
    throw GroupMismatch("cannot multiply elements of " +
                        g.group()->describe() + " and " +
                        h.group()->describe());
  }
  return GroupElement(g.group(), g.group()->multiply(g.word(), h.word()));
}

}  // namespace soficrank
