#pragma once

// Outer commutator words and power words: AST, parser, evaluation, and the
// verbal subgroup they define in T_n(K).

#include "vwidth/error.hpp"
#include "vwidth/field.hpp"
#include "vwidth/trimat.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vwidth {

class Word {
public:
  enum class Kind { Variable, Commutator, Power };

  static Word variable(unsigned index) {
    if (index < 1)
      throw Error(ErrorCode::InvalidWord, "variable indices start at 1");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Variable;
    node->index = index;
    return Word(std::move(node));
  }

  static Word commutator(Word left, Word right) {
    if (left.kind() == Kind::Power || right.kind() == Kind::Power)
      throw Error(ErrorCode::InvalidWord, "power words cannot be nested");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Commutator;
    node->left = std::move(left.node_);
    node->right = std::move(right.node_);
    return Word(std::move(node));
  }

  static Word power(std::uint64_t s) {
    if (s < 1)
      throw Error(ErrorCode::InvalidWord, "power exponent must be positive");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Power;
    node->exponent = s;
    return Word(std::move(node));
  }

  Kind kind() const { return node_->kind; }
  bool is_power() const { return kind() == Kind::Power; }
  unsigned index() const { return node_->index; }
  std::uint64_t exponent() const { return node_->exponent; }
  Word left() const { return Word(node_->left); }
  Word right() const { return Word(node_->right); }

  /// Canonical text; n-ary brackets are printed in nested binary form.
  std::string to_string() const {
    switch (kind()) {
    case Kind::Variable: return "x" + std::to_string(index());
    case Kind::Power: return "x^" + std::to_string(exponent());
    case Kind::Commutator: return "[" + left().to_string() + "," + right().to_string() + "]";
    }
    return {};
  }

  /// Leaf variable indices in left-to-right order (with repetitions).
  std::vector<unsigned> leaves() const {
    std::vector<unsigned> out;
    collect(out);
    return out;
  }

  friend bool operator==(const Word &a, const Word &b) { return a.to_string() == b.to_string(); }

private:
  struct Node {
    Kind kind = Kind::Variable;
    unsigned index = 0;
    std::uint64_t exponent = 0;
    std::shared_ptr<const Node> left, right;
  };

  explicit Word(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  void collect(std::vector<unsigned> &out) const {
    if (kind() == Kind::Variable)
      out.push_back(index());
    else if (kind() == Kind::Commutator) {
      left().collect(out);
      right().collect(out);
    }
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

class WordParser {
public:
  explicit WordParser(std::string_view text) : text_(text) {}

  Word parse() {
    skip_ws();
    Word out = Word::variable(1);
    if (peek() == 'x' && peek_after_x() == '^') {
      ++pos_;
      skip_ws();
      ++pos_;
      skip_ws();
      const auto s = digits();
      if (s == 0)
        fail("power exponent must be positive");
      out = Word::power(s);
    } else {
      out = word();
    }
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return out;
  }

private:
  Word word() {
    skip_ws();
    if (peek() == '[') {
      ++pos_;
      Word acc = word();
      std::size_t args = 1;
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        acc = Word::commutator(std::move(acc), word());
        ++args;
        skip_ws();
      }
      if (args < 2)
        fail("commutator needs at least two arguments");
      expect(']');
      return acc;
    }
    if (peek() == 'x') {
      ++pos_;
      skip_ws();
      const auto idx = digits();
      if (idx < 1 || idx > 1'000'000)
        fail("variable index out of range");
      return Word::variable(static_cast<unsigned>(idx));
    }
    fail("expected '[' or variable");
  }

  std::uint64_t digits() {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected digits");
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (UINT64_MAX - 9) / 10)
        fail("number too large");
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char peek_after_x() const {
    std::size_t i = pos_ + 1;
    while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i])))
      ++i;
    return i < text_.size() ? text_[i] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string &why) const {
    throw Error(ErrorCode::SyntaxError, why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Grammar: word := "x" digits | "[" word ("," word)+ "]"; or "x^" digits at
/// the top level. "[w1,w2,w3]" is the left-normed [[w1,w2],w3]. Whitespace
/// is ignored.
inline Word parse_word(std::string_view text) { return detail::WordParser(text).parse(); }

/// True iff the leaf variables are pairwise distinct.
inline bool validate_outer(const Word &w) {
  if (w.is_power())
    throw Error(ErrorCode::PowerWordInput, "power word is not an outer commutator word");
  const auto leaves = w.leaves();
  const std::set<unsigned> distinct(leaves.begin(), leaves.end());
  return distinct.size() == leaves.size();
}

using Assignment = std::map<unsigned, TriMat>;

inline TriMat evaluate(const Word &w, const Assignment &assign) {
  switch (w.kind()) {
  case Word::Kind::Variable: {
    auto it = assign.find(w.index());
    if (it == assign.end())
      throw Error(ErrorCode::MissingAssignment, "no value for x" + std::to_string(w.index()));
    return it->second;
  }
  case Word::Kind::Commutator: {
    const TriMat a = evaluate(w.left(), assign);
    const TriMat b = evaluate(w.right(), assign);
    if (a.spec() != b.spec())
      throw Error(ErrorCode::SpecMismatch, "assigned matrices over different fields");
    if (a.n() != b.n())
      throw Error(ErrorCode::SizeMismatch, "assigned matrices of different sizes");
    return commutator(a, b);
  }
  case Word::Kind::Power:
    throw Error(ErrorCode::PowerWordInput, "evaluate a power word with evaluate_power");
  }
  throw InvariantViolation("unreachable word kind");
}

/// Value of the power word x^s at `base`.
inline TriMat evaluate_power(const Word &w, const TriMat &base) {
  if (!w.is_power())
    throw Error(ErrorCode::InvalidWord, "not a power word");
  return base.pow(static_cast<long long>(w.exponent()));
}

/// Level tag of an outer commutator word: 0 stands for T_n, r >= 1 for UT_n^r.
inline std::size_t level_of(const Word &w, const FieldSpec &spec) {
  if (w.is_power())
    throw Error(ErrorCode::PowerWordInput, "level of a power word");
  const bool binary_field = spec.is_finite() && spec.q() == 2;
  if (w.kind() == Word::Kind::Variable)
    return binary_field ? 1 : 0;
  const std::size_t l = level_of(w.left(), spec);
  const std::size_t r = level_of(w.right(), spec);
  if (binary_field)
    return l + r;
  if (l == 0 && r == 0)
    return 1;
  if (l == 0 || r == 0)
    return std::max(l, r);
  return l + r;
}

enum class VerbalKind { Power, Level, Full, Trivial };
enum class PowerCase { None, Coprime, BetaExists, ReducesToUnipotent, Trivial };

inline const char *to_string(VerbalKind k) {
  switch (k) {
  case VerbalKind::Power: return "power";
  case VerbalKind::Level: return "level";
  case VerbalKind::Full: return "full";
  case VerbalKind::Trivial: return "trivial";
  }
  return "?";
}

inline const char *to_string(PowerCase c) {
  switch (c) {
  case PowerCase::None: return "none";
  case PowerCase::Coprime: return "coprime";
  case PowerCase::BetaExists: return "beta-exists";
  case PowerCase::ReducesToUnipotent: return "reduces-to-unipotent";
  case PowerCase::Trivial: return "trivial";
  }
  return "?";
}

/// Identity of v(T_n(K), w).
struct VerbalDescriptor {
  VerbalKind kind = VerbalKind::Full;
  std::size_t level = 0;      // Level: the r of UT_n^r
  std::uint64_t exponent = 0; // power words only
  PowerCase power_case = PowerCase::None;
  FieldSpec spec;
  std::size_t n = 0;
};

namespace detail {

inline std::uint64_t p_valuation(std::uint64_t s, std::uint64_t p) {
  std::uint64_t t = 0;
  while (s % p == 0) {
    s /= p;
    ++t;
  }
  return t;
}

/// p^t, saturated just above `cap`.
inline std::uint64_t saturating_pow(std::uint64_t p, std::uint64_t t, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < t; ++i) {
    if (out > cap)
      return cap + 1;
    out *= p;
  }
  return out;
}

inline VerbalDescriptor level_descriptor(std::size_t r, const FieldSpec &spec, std::size_t n) {
  VerbalDescriptor d;
  d.spec = spec;
  d.n = n;
  if (r == 0) {
    d.kind = VerbalKind::Full;
  } else if (r >= n) {
    d.kind = VerbalKind::Trivial;
  } else {
    d.kind = VerbalKind::Level;
    d.level = r;
  }
  return d;
}

} // namespace detail

inline VerbalDescriptor verbal_descriptor(const Word &w, const FieldSpec &spec, std::size_t n) {
  if (n < 1)
    throw Error(ErrorCode::BadSize, "matrix size must be positive");
  if (!w.is_power()) {
    if (!validate_outer(w))
      throw Error(ErrorCode::InvalidWord, w.to_string() + " repeats a variable");
    return detail::level_descriptor(level_of(w, spec), spec, n);
  }
  const std::uint64_t s = w.exponent();
  VerbalDescriptor d;
  d.spec = spec;
  d.n = n;
  d.exponent = s;
  if (!spec.is_finite()) {
    d.kind = VerbalKind::Power;
    d.power_case = PowerCase::Coprime;
    return d;
  }
  const std::uint64_t p = spec.p();
  const bool p_divides = s % p == 0;
  const bool order_divides = s % (spec.q() - 1) == 0;
  if (!order_divides) {
    d.kind = VerbalKind::Power;
    d.power_case = p_divides ? PowerCase::BetaExists : PowerCase::Coprime;
    return d;
  }
  const std::uint64_t r = p_divides ? detail::saturating_pow(p, detail::p_valuation(s, p), n) : 1;
  VerbalDescriptor lvl = detail::level_descriptor(static_cast<std::size_t>(r), spec, n);
  lvl.exponent = s;
  lvl.power_case = lvl.kind == VerbalKind::Trivial
                       ? PowerCase::Trivial
                       : (p_divides ? PowerCase::ReducesToUnipotent : PowerCase::Coprime);
  return lvl;
}

inline bool membership(const TriMat &a, const VerbalDescriptor &d) {
  if (a.spec() != d.spec || a.n() != d.n)
    throw Error(ErrorCode::ContextMismatch, "matrix does not match the descriptor's group");
  switch (d.kind) {
  case VerbalKind::Power:
    for (std::size_t i = 0; i < a.n(); ++i)
      if (!is_sth_power(a.at(i, i), d.exponent))
        return false;
    return true;
  case VerbalKind::Level: return is_level(a, d.level);
  case VerbalKind::Full: return true;
  case VerbalKind::Trivial: return a.is_identity();
  }
  return false;
}

} // namespace vwidth
