#include "soficrank/parse.hpp"

#include <cctype>
#include <string>

namespace soficrank {

namespace {

constexpr std::int64_t kMaxExponent = 1'000'000;

class Parser {
 public:
  Parser(const GroupPtr& group, std::string_view text)
      : group_(group), text_(text) {}

  GroupRingElement parse() {
    skip();
    if (pos_ == text_.size()) fail("empty expression");
    auto out = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const { fail_at(why, pos_); }
  [[noreturn]] void fail_at(const std::string& why, std::size_t at) const {
    throw ParseError(why, std::string(text_), at);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= text_.size()) return false;
    const auto c = static_cast<unsigned char>(text_[pos_]);
    return std::isdigit(c) || std::isalpha(c) || c == '_' || c == '(';
  }

  GroupRingElement expr() {
    bool negate = false;
    if (peek('+')) {
      ++pos_;
    } else if (peek('-')) {
      ++pos_;
      negate = true;
    }
    auto acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  GroupRingElement term() {
    auto acc = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        if (!starts_primary()) fail("expected a factor after '*'");
        acc = acc * factor();
      } else if (starts_primary()) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  GroupRingElement factor() {
    const std::size_t start = pos_;
    auto base = primary();
    if (!peek('^')) return base;
    ++pos_;
    skip();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    skip();
    const std::size_t exp_at = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected an integer exponent");
    }
    const std::int64_t n = integer(exp_at);
    if (n > kMaxExponent) fail_at("exponent too large", exp_at);
    if (negative) {
      if (base.support_size() != 1) {
        fail_at("negative powers need a unit +-g", start);
      }
      const auto& [w, c] = *base.terms().begin();
      if (c != 1 && c != -1) fail_at("negative powers need a unit +-g", start);
      GroupRingElement inv(group_);
      inv.add_term(group_->inverse(w), c);
      return power(inv, n);
    }
    return power(base, n);
  }

  GroupRingElement power(const GroupRingElement& base, std::int64_t n) {
    auto out = GroupRingElement::one(group_);
    auto b = base;
    while (n > 0) {
      if (n & 1) out = out * b;
      n >>= 1;
      if (n > 0) b = b * b;
    }
    return out;
  }

  std::int64_t integer(std::size_t at) {
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (INT64_MAX - 9) / 10) fail_at("integer too large", at);
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  GroupRingElement primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    const auto c = static_cast<unsigned char>(text_[pos_]);
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(c)) {
      // Digits only; an identifier may follow as an implicit product.
      Integer v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      auto out = GroupRingElement::one(group_);
      out *= v;
      return out;
    }
    if (std::isalpha(c) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      const auto& labels = group_->generators();
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == name) {
          GroupRingElement out(group_);
          out.add_term(group_->generator(i), Integer(1));
          return out;
        }
      }
      if (name == "e") return GroupRingElement::one(group_);
      fail_at("unknown generator '" + name + "' for " + group_->describe(), start);
    }
    fail("unexpected '" + std::string(1, static_cast<char>(c)) + "'");
  }

  GroupPtr group_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupRingElement parse_element(const GroupPtr& group, std::string_view text) {
  if (!group) throw ValidationError("parse without a group");
  return Parser(group, text).parse();
}

GroupElement parse_group_element(const GroupPtr& group, std::string_view text) {
  const auto x = parse_element(group, text);
  if (x.support_size() != 1 || x.terms().begin()->second != 1) {
    throw ParseError("expected a single group element", std::string(text), 0);
  }
  return GroupElement(group, x.terms().begin()->first);
}

}  // namespace soficrank
