#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace vwidth;
using vwidth::testing::random_level;
using vwidth::testing::random_trimat;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &err) {
    return err.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::ParseError;
}

TriMat unit_plus(const FieldSpec &k, std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> units) {
  TriArray a = TriArray::identity(k, n);
  for (auto [i, j] : units)
    a = a + matrix_unit(k, n, i, j);
  return TriMat::from_array(a);
}

} // namespace

TEST(Case1, Examples) {
  const FieldSpec k = gf(3);
  const auto [a, b] = solve_case1(mat_from_ints(k, {{1, 1}, {0, 1}}), 1);
  EXPECT_EQ(a, mat_from_ints(k, {{1, 1}, {0, 1}}));
  EXPECT_EQ(b, mat_from_ints(k, {{1, 0}, {0, 2}}));

  const auto [a1, b1] = solve_case1(TriMat::identity(k, 4), 1);
  EXPECT_EQ(a1, unit_plus(k, 4, {{1, 2}, {2, 3}, {3, 4}}));
  EXPECT_TRUE(b1.is_identity());
}

TEST(Case1, Errors) {
  EXPECT_EQ(code_of([] { solve_case1(TriMat::identity(gf(2), 3), 1); }), ErrorCode::FieldTooSmall);
  EXPECT_EQ(code_of([] { solve_case1(TriMat::identity(gf(3), 3), 0); }), ErrorCode::BadSize);
  EXPECT_EQ(code_of([] { solve_case1(unit_plus(gf(3), 3, {{1, 2}}), 2); }), ErrorCode::NotLevel);
  EXPECT_EQ(code_of([] { solve_case1(mat_from_ints(gf(3), {{2, 0}, {0, 1}}), 1); }), ErrorCode::NotLevel);
}

TEST(Case1, RandomTargets) {
  std::mt19937_64 rng(41);
  for (const FieldSpec &k : {gf(3), gf(2, 2), gf(5), rationals()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 2 + trial % 5;
      const std::size_t r = 1 + trial % (n - 1);
      const TriMat c = random_level(k, n, r, rng);
      const auto [a, b] = solve_case1(c, r);
      EXPECT_TRUE(is_level(a, r));
      EXPECT_EQ(commutator(a, b), c) << k.name();
    }
  }
}

TEST(Case2, Examples) {
  const FieldSpec k = gf(3);
  const auto [a, b] = solve_case2(unit_plus(k, 3, {{1, 3}}), 1, 1);
  EXPECT_EQ(a, unit_plus(k, 3, {{1, 2}, {2, 3}}));
  EXPECT_EQ(b, unit_plus(k, 3, {{2, 3}}));

  const auto [a1, b1] = solve_case2(TriMat::identity(k, 5), 2, 1);
  EXPECT_TRUE(b1.is_identity());

  const FieldSpec k2 = gf(2);
  const TriMat c = unit_plus(k2, 4, {{1, 3}});
  const auto [a2, b2] = solve_case2(c, 1, 1);
  EXPECT_EQ(commutator(a2, b2), c);
}

TEST(Case2, Errors) {
  EXPECT_EQ(code_of([] { solve_case2(TriMat::identity(gf(3), 3), 0, 1); }), ErrorCode::BadSize);
  EXPECT_EQ(code_of([] { solve_case2(unit_plus(gf(3), 3, {{1, 2}}), 1, 1); }), ErrorCode::NotLevel);
}

TEST(Case2, RandomTargetsEveryField) {
  std::mt19937_64 rng(43);
  for (const FieldSpec &k : {gf(2), gf(3), gf(2, 2), rationals()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 3 + trial % 4;
      const std::size_t r = 1 + trial % 2, s = 1 + (trial / 2) % 2;
      const TriMat c = random_level(k, n, r + s, rng);
      const auto [a, b] = solve_case2(c, r, s);
      EXPECT_TRUE(is_level(a, r));
      EXPECT_TRUE(is_level(b, s));
      EXPECT_EQ(commutator(a, b), c) << k.name();
    }
  }
}

TEST(OuterWitness, Examples) {
  const FieldSpec k = gf(3);
  const TriMat c = mat_from_ints(k, {{1, 1}, {0, 1}});
  const WordWitness w = outer_witness(parse_word("[x1,x2]"), c);
  EXPECT_EQ(w.assign.at(1), mat_from_ints(k, {{1, 1}, {0, 1}}));
  EXPECT_EQ(w.assign.at(2), mat_from_ints(k, {{1, 0}, {0, 2}}));
  EXPECT_TRUE(verify_word_witness(w, c));

  const TriMat c13 = unit_plus(k, 3, {{1, 3}});
  const WordWitness w4 = outer_witness(parse_word("[[x1,x2],[x3,x4]]"), c13);
  EXPECT_EQ(w4.assign.size(), 4U);
  EXPECT_EQ(evaluate(w4.word, w4.assign), c13);

  const WordWitness id = outer_witness(parse_word("[[x1,x2],x3]"), TriMat::identity(k, 4));
  EXPECT_TRUE(evaluate(id.word, id.assign).is_identity());
}

TEST(OuterWitness, VariableOnTheLeftAndSingleVariable) {
  std::mt19937_64 rng(47);
  const FieldSpec k = gf(5);
  const TriMat c = random_level(k, 4, 1, rng);
  for (const char *text : {"[x3,[x1,x2]]", "[x4,[[x1,x2],x3]]"}) {
    const WordWitness w = outer_witness(parse_word(text), c);
    EXPECT_TRUE(verify_word_witness(w, c)) << text;
  }
  const TriMat any = random_trimat(k, 3, rng);
  EXPECT_EQ(outer_witness(parse_word("x1"), any).assign.at(1), any);
}

TEST(OuterWitness, Errors) {
  const FieldSpec k = gf(3);
  EXPECT_EQ(code_of([&] { outer_witness(parse_word("[x1,x1]"), TriMat::identity(k, 2)); }), ErrorCode::InvalidWord);
  EXPECT_EQ(code_of([&] { outer_witness(parse_word("x^2"), TriMat::identity(k, 2)); }), ErrorCode::PowerWordInput);
  EXPECT_EQ(code_of([&] { outer_witness(parse_word("[x1,x2]"), mat_from_ints(k, {{2, 0}, {0, 1}})); }),
            ErrorCode::NotInVerbal);
  EXPECT_EQ(code_of([&] { outer_witness(parse_word("[[x1,x2],[x3,x4]]"), unit_plus(k, 3, {{1, 2}})); }),
            ErrorCode::NotInVerbal);
}

TEST(OuterWitness, RandomTargetsAcrossFieldsAndWords) {
  std::mt19937_64 rng(53);
  for (const FieldSpec &k : {gf(2), gf(3), gf(2, 2), gf(7), rationals()}) {
    for (const char *text : {"[x1,x2]", "[[x1,x2],x3]", "[[x1,x2],[x3,x4]]", "[x1,[x2,x3]]",
                             "[[[x1,x2],[x3,x4]],[x5,x6]]", "[[x1,x2],[x3,x4],[x5,x6]]"}) {
      const Word w = parse_word(text);
      for (std::size_t n = 1; n <= 7; ++n) {
        const VerbalDescriptor d = verbal_descriptor(w, k, n);
        TriMat c = TriMat::identity(k, n);
        if (d.kind == VerbalKind::Level)
          c = random_level(k, n, d.level, rng);
        const WordWitness ww = outer_witness(w, c);
        EXPECT_TRUE(verify_word_witness(ww, c)) << k.name() << " " << text << " n=" << n;
      }
    }
  }
}

TEST(OuterWitness, VerifierRejectsBadAssignments) {
  const FieldSpec k = gf(3);
  const TriMat c = mat_from_ints(k, {{1, 1}, {0, 1}});
  WordWitness w = outer_witness(parse_word("[x1,x2]"), c);
  EXPECT_FALSE(verify_word_witness(w, TriMat::identity(k, 2)));
  w.assign.erase(2);
  EXPECT_FALSE(verify_word_witness(w, c));
  w.assign.emplace(2, TriMat::identity(k, 2));
  w.assign.emplace(3, TriMat::identity(k, 2));
  EXPECT_FALSE(verify_word_witness(w, c));
}

TEST(OuterPredict, WidthIsOneUnlessTrivial) {
  EXPECT_EQ(outer_width_predict(parse_word("[x1,x2]"), gf(3), 3), 1);
  EXPECT_EQ(outer_width_predict(parse_word("[x1,x2]"), gf(3), 1), 0);
  EXPECT_EQ(outer_width_predict(parse_word("[[x1,x2],[x3,x4]]"), gf(2), 4), 0);
  EXPECT_EQ(outer_width_predict(parse_word("[[x1,x2],[x3,x4]]"), gf(2), 5), 1);
  EXPECT_EQ(outer_width_predict(parse_word("x1"), rationals(), 1), 1);
}

TEST(FinitaryOuter, CornerTargets) {
  std::mt19937_64 rng(59);
  const FieldSpec k = gf(3);
  for (int trial = 0; trial < 30; ++trial) {
    const FinitaryMat c = fin_make(random_level(k, 1 + trial % 4, 1, rng));
    const FinitaryWordWitness w = finitary_outer_witness(parse_word("[x1,x2]"), c);
    std::size_t m = c.corner_size() + 1;
    for (const auto &[var, f] : w.assign)
      m = std::max(m, f.corner_size());
    Assignment at_m;
    for (const auto &[var, f] : w.assign)
      at_m.emplace(var, fin_embed(f, m));
    EXPECT_EQ(fin_make(evaluate(w.word, at_m)), c);
  }
}
