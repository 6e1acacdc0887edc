#pragma once

// Single-value witnesses for outer commutator words: every c in v(T_n(K), w)
// is written as one value of w.

#include "vwidth/error.hpp"
#include "vwidth/field.hpp"
#include "vwidth/trimat.hpp"
#include "vwidth/words.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>

namespace vwidth {

struct WordWitness {
  Word word;
  Assignment assign;
  FieldSpec spec;
  std::size_t n = 0;
};

inline bool verify_word_witness(const WordWitness &w, const TriMat &target) {
  const auto vars = w.word.leaves();
  if (vars.size() != w.assign.size())
    return false;
  for (unsigned v : vars)
    if (!w.assign.count(v))
      return false;
  return evaluate(w.word, w.assign) == target;
}

namespace detail {

/// Fills rows r.. of b from ab = ba c with a = e + sum alpha_i e_{i,i+r}.
/// Row i of b determines row i + r; rows 0..r-1 must already be set.
inline void solve_rows_from_relation(TriArray &b, const std::vector<FieldElem> &alpha, const TriMat &c,
                                     std::size_t r) {
  const std::size_t n = c.n();
  const FieldSpec &spec = c.spec();
  for (std::size_t i = 0; i + r < n; ++i) {
    const std::size_t row = i + r;
    for (std::size_t j = row; j < n; ++j) {
      // (ba)_{il} = b_{il} + b_{i,l-r} alpha_{l-r}
      FieldElem acc = FieldElem::zero(spec);
      for (std::size_t l = i; l <= j; ++l) {
        FieldElem ba = b.at(i, l);
        if (l >= i + r)
          ba += b.at(i, l - r) * alpha[l - r];
        if (!ba.is_zero())
          acc += ba * c.at(l, j);
      }
      b.set(row, j, (acc - b.at(i, j)) / alpha[i]);
    }
  }
}

} // namespace detail

/// [a, b] = c for c of level r, with a = e + sum a_{i,i+r} e_{i,i+r} of
/// level r. Needs at least three field elements.
inline std::pair<TriMat, TriMat> solve_case1(const TriMat &c, std::size_t r) {
  const FieldSpec &spec = c.spec();
  if (spec.is_finite() && spec.q() == 2)
    throw Error(ErrorCode::FieldTooSmall, "GF(2) has no a_{i,i+r} avoiding both 0 and -c_{i,i+r}");
  if (r < 1)
    throw Error(ErrorCode::BadSize, "level must be at least 1");
  if (!is_level(c, r))
    throw Error(ErrorCode::NotLevel, "target is not of level " + std::to_string(r));
  const std::size_t n = c.n();
  std::vector<FieldElem> alpha;
  TriArray a = TriArray::identity(spec, n);
  for (std::size_t i = 0; i + r < n; ++i) {
    const FieldElem avoid = -c.at(i, i + r);
    FieldElem pick = FieldElem::one(spec);
    if (spec.is_finite()) {
      for (std::uint32_t code = 1; code < spec.q(); ++code) {
        pick = FieldElem::from_code(spec, code);
        if (pick != avoid)
          break;
      }
    } else {
      for (long long v = 1; FieldElem::from_int(spec, v) == avoid; ++v)
        pick = FieldElem::from_int(spec, v + 1);
    }
    alpha.push_back(pick);
    a.set(i, i + r, pick);
  }
  TriArray b = TriArray::identity(spec, n);
  detail::solve_rows_from_relation(b, alpha, c, r);
  TriMat am = TriMat::from_array(std::move(a));
  TriMat bm = TriMat::from_array(std::move(b));
  ensure(is_level(am, r), "case 1 first factor lost its level");
  ensure(commutator(am, bm) == c, "case 1 commutator failed to verify");
  return {std::move(am), std::move(bm)};
}

/// [a, b] = c for c of level r + s, with a = e + sum e_{i,i+r} fixed and b of
/// level s. Works over every field.
inline std::pair<TriMat, TriMat> solve_case2(const TriMat &c, std::size_t r, std::size_t s) {
  if (r < 1 || s < 1)
    throw Error(ErrorCode::BadSize, "levels must be at least 1");
  if (!is_level(c, r + s))
    throw Error(ErrorCode::NotLevel, "target is not of level " + std::to_string(r + s));
  const FieldSpec &spec = c.spec();
  const std::size_t n = c.n();
  const std::vector<FieldElem> alpha(n, FieldElem::one(spec));
  TriArray a = TriArray::identity(spec, n);
  for (std::size_t i = 0; i + r < n; ++i)
    a.set(i, i + r, FieldElem::one(spec));
  TriArray b = TriArray::identity(spec, n);
  detail::solve_rows_from_relation(b, alpha, c, r);
  TriMat am = TriMat::from_array(std::move(a));
  TriMat bm = TriMat::from_array(std::move(b));
  ensure(is_level(bm, s), "case 2 second factor lost its level");
  ensure(commutator(am, bm) == c, "case 2 commutator failed to verify");
  return {std::move(am), std::move(bm)};
}

namespace detail {

inline void assign_outer(const Word &w, const TriMat &c, Assignment &out) {
  if (w.kind() == Word::Kind::Variable) {
    out.emplace(w.index(), c);
    return;
  }
  const FieldSpec &spec = c.spec();
  const std::size_t lu = level_of(w.left(), spec);
  const std::size_t lv = level_of(w.right(), spec);
  const bool binary = spec.is_finite() && spec.q() == 2;
  if (binary || (lu >= 1 && lv >= 1)) {
    auto [a, b] = solve_case2(c, lu, lv);
    assign_outer(w.left(), a, out);
    assign_outer(w.right(), b, out);
  } else if (lu >= 1) {
    auto [a, b] = solve_case1(c, lu);
    assign_outer(w.left(), a, out);
    assign_outer(w.right(), b, out);
  } else if (lv >= 1) {
    // [a, b] = c^{-1} gives [b, a] = c
    auto [a, b] = solve_case1(c.inverse(), lv);
    assign_outer(w.left(), b, out);
    assign_outer(w.right(), a, out);
  } else {
    auto [a, b] = solve_case1(c, 1);
    assign_outer(w.left(), a, out);
    assign_outer(w.right(), b, out);
  }
}

} // namespace detail

/// Assignment of the variables of w whose value is exactly c.
inline WordWitness outer_witness(const Word &w, const TriMat &c) {
  if (!validate_outer(w))
    throw Error(ErrorCode::InvalidWord, w.to_string() + " repeats a variable");
  const FieldSpec &spec = c.spec();
  const std::size_t n = c.n();
  if (!membership(c, verbal_descriptor(w, spec, n)))
    throw Error(ErrorCode::NotInVerbal, "matrix is not in v(T_n, " + w.to_string() + ")");
  WordWitness out{w, {}, spec, n};
  detail::assign_outer(w, c, out.assign);
  ensure(verify_word_witness(out, c), "outer witness failed to verify");
  return out;
}

/// Predicted width of an outer commutator word: 1, or 0 when its verbal
/// subgroup is trivial.
inline int outer_width_predict(const Word &w, const FieldSpec &spec, std::size_t n) {
  return verbal_descriptor(w, spec, n).kind == VerbalKind::Trivial ? 0 : 1;
}

struct FinitaryWordWitness {
  Word word;
  std::map<unsigned, FinitaryMat> assign;
  FieldSpec spec;
};

/// Outer witness over FT(K), solved at the corner of the target.
inline FinitaryWordWitness finitary_outer_witness(const Word &w, const FinitaryMat &c) {
  const WordWitness inner = outer_witness(w, c.corner());
  FinitaryWordWitness out{w, {}, c.spec()};
  for (const auto &[var, m] : inner.assign)
    out.assign.emplace(var, fin_make(m));
  // re-check in FT(K): corners of different sizes multiply through embedding
  std::map<unsigned, FinitaryMat> values = out.assign;
  std::function<FinitaryMat(const Word &)> eval = [&](const Word &node) -> FinitaryMat {
    if (node.kind() == Word::Kind::Variable)
      return values.at(node.index());
    const FinitaryMat l = eval(node.left()), r = eval(node.right());
    return fin_mul(fin_mul(fin_inv(l), fin_inv(r)), fin_mul(l, r));
  };
  ensure(eval(w) == c, "finitary outer witness failed to verify");
  return out;
}

} // namespace vwidth
