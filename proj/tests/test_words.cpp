#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace vwidth;

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

} // namespace

TEST(ParseWord, Examples) {
  const Word w = parse_word("[[x1,x2],x3]");
  ASSERT_EQ(w.kind(), Word::Kind::Commutator);
  EXPECT_EQ(w.left(), Word::commutator(Word::variable(1), Word::variable(2)));
  EXPECT_EQ(w.right(), Word::variable(3));
  const Word p = parse_word("x^6");
  EXPECT_TRUE(p.is_power());
  EXPECT_EQ(p.exponent(), 6U);
  EXPECT_EQ(code_of([] { parse_word("[x1]"); }), ErrorCode::SyntaxError);
}

TEST(ParseWord, LeftNormedAndWhitespace) {
  EXPECT_EQ(parse_word("[x1, x2, x3]"), parse_word("[[x1,x2],x3]"));
  EXPECT_EQ(parse_word("  [ x10 ,x2 ] ").to_string(), "[x10,x2]");
  EXPECT_EQ(parse_word("x7").index(), 7U);
  EXPECT_EQ(parse_word("[[x1,x2],[x3,x4]]").leaves(), (std::vector<unsigned>{1, 2, 3, 4}));
}

TEST(ParseWord, Malformed) {
  for (const char *bad : {"", "x", "y1", "[x1,x2", "[x1,x2]]", "[x1,,x2]", "x^", "x^0", "[x^2,x1]", "x1x2", "[]"})
    EXPECT_EQ(code_of([&] { parse_word(bad); }), ErrorCode::SyntaxError) << bad;
}

TEST(ValidateOuter, Examples) {
  EXPECT_TRUE(validate_outer(parse_word("[[x1,x2],[x3,x4]]")));
  EXPECT_FALSE(validate_outer(parse_word("[[x1,x2],[x1,x3]]")));
  EXPECT_TRUE(validate_outer(parse_word("x1")));
  EXPECT_EQ(code_of([] { validate_outer(parse_word("x^2")); }), ErrorCode::PowerWordInput);
}

TEST(Evaluate, Examples) {
  const FieldSpec k3 = gf(3), k5 = gf(5);
  const Assignment assign{{1, mat_from_ints(k3, {{1, 1}, {0, 1}})}, {2, mat_from_ints(k3, {{1, 0}, {0, 2}})}};
  EXPECT_EQ(evaluate(parse_word("[x1,x2]"), assign), mat_from_ints(k3, {{1, 1}, {0, 1}}));
  EXPECT_EQ(evaluate_power(parse_word("x^2"), mat_from_ints(k5, {{2, 4}, {0, 2}})), mat_from_ints(k5, {{4, 1}, {0, 4}}));

  Assignment ones;
  for (unsigned v = 1; v <= 4; ++v)
    ones.emplace(v, TriMat::identity(k3, 3));
  EXPECT_TRUE(evaluate(parse_word("[[x1,x2],[x3,x4]]"), ones).is_identity());
}

TEST(Evaluate, Errors) {
  const FieldSpec k3 = gf(3);
  const Assignment one{{1, TriMat::identity(k3, 2)}};
  EXPECT_EQ(code_of([&] { evaluate(parse_word("[x1,x2]"), one); }), ErrorCode::MissingAssignment);
  EXPECT_EQ(code_of([&] { evaluate(parse_word("x^2"), one); }), ErrorCode::PowerWordInput);
  EXPECT_EQ(code_of([&] { evaluate_power(parse_word("x1"), TriMat::identity(k3, 2)); }), ErrorCode::InvalidWord);
  const Assignment mixed{{1, TriMat::identity(k3, 2)}, {2, TriMat::identity(k3, 3)}};
  EXPECT_EQ(code_of([&] { evaluate(parse_word("[x1,x2]"), mixed); }), ErrorCode::SizeMismatch);
  const Assignment fields{{1, TriMat::identity(k3, 2)}, {2, TriMat::identity(gf(5), 2)}};
  EXPECT_EQ(code_of([&] { evaluate(parse_word("[x1,x2]"), fields); }), ErrorCode::SpecMismatch);
}

TEST(LevelOf, LargeFields) {
  const FieldSpec k = gf(3);
  EXPECT_EQ(level_of(parse_word("x1"), k), 0U);
  EXPECT_EQ(level_of(parse_word("[x1,x2]"), k), 1U);
  EXPECT_EQ(level_of(parse_word("[[x1,x2],[x3,x4]]"), k), 2U);
  EXPECT_EQ(level_of(parse_word("[[x1,x2],x3]"), k), 1U);
  EXPECT_EQ(level_of(parse_word("[[[x1,x2],[x3,x4]],[x5,x6]]"), rationals()), 3U);
}

TEST(LevelOf, BinaryFieldCountsLeaves) {
  const FieldSpec k = gf(2);
  EXPECT_EQ(level_of(parse_word("x1"), k), 1U);
  EXPECT_EQ(level_of(parse_word("[x1,x2]"), k), 2U);
  EXPECT_EQ(level_of(parse_word("[[x1,x2],x3]"), k), 3U);
  EXPECT_EQ(level_of(parse_word("[[x1,x2],[x3,x4]]"), k), 4U);
  EXPECT_EQ(code_of([&] { level_of(parse_word("x^2"), k); }), ErrorCode::PowerWordInput);
}

TEST(Descriptor, Examples) {
  const VerbalDescriptor cubes = verbal_descriptor(parse_word("x^3"), gf(3), 2);
  EXPECT_EQ(cubes.kind, VerbalKind::Power);
  EXPECT_EQ(cubes.power_case, PowerCase::BetaExists);
  for (const TriMat &a : enumerate_group(gf(3), 2, GroupKind::Full))
    EXPECT_TRUE(membership(a, cubes));

  const VerbalDescriptor six = verbal_descriptor(parse_word("x^6"), gf(3), 4);
  EXPECT_EQ(six.kind, VerbalKind::Level);
  EXPECT_EQ(six.level, 3U);
  EXPECT_EQ(six.power_case, PowerCase::ReducesToUnipotent);

  const VerbalDescriptor sq = verbal_descriptor(parse_word("x^2"), rationals(), 3);
  EXPECT_EQ(sq.kind, VerbalKind::Power);
  EXPECT_EQ(sq.power_case, PowerCase::Coprime);
}

TEST(Descriptor, LevelsAndTrivialGroups) {
  EXPECT_EQ(verbal_descriptor(parse_word("x1"), gf(3), 3).kind, VerbalKind::Full);
  EXPECT_EQ(verbal_descriptor(parse_word("[x1,x2]"), gf(3), 1).kind, VerbalKind::Trivial);
  EXPECT_EQ(verbal_descriptor(parse_word("[[x1,x2],[x3,x4]]"), gf(2), 4).kind, VerbalKind::Trivial);
  EXPECT_EQ(verbal_descriptor(parse_word("[[x1,x2],[x3,x4]]"), gf(2), 5).level, 4U);
  // p does not divide s but q - 1 does: the diagonal dies and UT_n survives
  const VerbalDescriptor d = verbal_descriptor(parse_word("x^4"), gf(5), 3);
  EXPECT_EQ(d.kind, VerbalKind::Level);
  EXPECT_EQ(d.level, 1U);
  EXPECT_EQ(d.power_case, PowerCase::Coprime);
  // p^t >= n kills everything
  EXPECT_EQ(verbal_descriptor(parse_word("x^4"), gf(2), 3).power_case, PowerCase::Trivial);
  EXPECT_EQ(code_of([] { verbal_descriptor(parse_word("[x1,x1]"), gf(3), 3); }), ErrorCode::InvalidWord);
  EXPECT_EQ(code_of([] { verbal_descriptor(parse_word("x1"), gf(3), 0); }), ErrorCode::BadSize);
}

TEST(Membership, Examples) {
  const FieldSpec q = rationals();
  const VerbalDescriptor sq = verbal_descriptor(parse_word("x^2"), q, 2);
  EXPECT_TRUE(membership(mat_from_ints(q, {{4, 7}, {0, 9}}), sq));
  EXPECT_FALSE(membership(mat_from_ints(q, {{2, 0}, {0, 1}}), sq));

  const FieldSpec k = gf(3);
  TriArray e12 = TriArray::identity(k, 4) + matrix_unit(k, 4, 1, 2);
  EXPECT_FALSE(membership(TriMat::from_array(e12), verbal_descriptor(parse_word("x^6"), k, 4)));
  EXPECT_TRUE(membership(TriMat::identity(k, 3), verbal_descriptor(parse_word("x^9"), k, 3)));
}

TEST(Membership, ContextMismatch) {
  const VerbalDescriptor d = verbal_descriptor(parse_word("x^2"), gf(3), 3);
  EXPECT_EQ(code_of([&] { membership(TriMat::identity(gf(3), 2), d); }), ErrorCode::ContextMismatch);
  EXPECT_EQ(code_of([&] { membership(TriMat::identity(gf(5), 3), d); }), ErrorCode::ContextMismatch);
}

TEST(Membership, WordValuesAlwaysBelong) {
  std::mt19937_64 rng(19);
  for (const FieldSpec &k : {gf(2), gf(3), gf(2, 2), gf(5), rationals()}) {
    for (std::uint64_t s = 1; s <= 9; ++s) {
      const VerbalDescriptor d = verbal_descriptor(Word::power(s), k, 4);
      for (int trial = 0; trial < 20; ++trial)
        EXPECT_TRUE(membership(vwidth::testing::random_trimat(k, 4, rng).pow(static_cast<long long>(s)), d))
            << k.name() << " s=" << s;
    }
    for (const char *text : {"[x1,x2]", "[[x1,x2],x3]", "[[x1,x2],[x3,x4]]"}) {
      const Word w = parse_word(text);
      const VerbalDescriptor d = verbal_descriptor(w, k, 5);
      for (int trial = 0; trial < 20; ++trial) {
        Assignment assign;
        for (unsigned v : w.leaves())
          assign.emplace(v, vwidth::testing::random_trimat(k, 5, rng));
        EXPECT_TRUE(membership(evaluate(w, assign), d)) << k.name() << " " << text;
      }
    }
  }
}
