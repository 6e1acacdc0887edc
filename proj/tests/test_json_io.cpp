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

TEST(FieldShorthand, Forms) {
  EXPECT_EQ(parse_field_shorthand("q"), rationals());
  EXPECT_EQ(parse_field_shorthand("gf5"), gf(5));
  EXPECT_EQ(parse_field_shorthand("gf4"), gf(2, 2));
  EXPECT_EQ(parse_field_shorthand("gf9"), gf(3, 2));
  EXPECT_EQ(parse_field_shorthand("gf2_3"), gf(2, 3));
  EXPECT_EQ(code_of([] { parse_field_shorthand("gf6"); }), ErrorCode::NonPrimeP);
  EXPECT_EQ(code_of([] { parse_field_shorthand("gf1"); }), ErrorCode::NonPrimeP);
  EXPECT_EQ(code_of([] { parse_field_shorthand("gf"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_field_shorthand("f5"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_field_shorthand("gf5x"); }), ErrorCode::ParseError);
}

TEST(FieldJson, RoundTrip) {
  for (const FieldSpec &k : {rationals(), gf(7), gf(2, 2), gf(3, 3)})
    EXPECT_EQ(field_from_json(field_to_json(k)), k) << k.name();
  EXPECT_EQ(field_from_json(Json("gf3")), gf(3));
  const Json custom = Json::parse(R"({"kind":"prime-power","p":2,"k":3,"modulus":[1,1,0,1]})");
  EXPECT_EQ(field_from_json(custom).modulus(), (std::vector<std::uint32_t>{1, 1, 0, 1}));
  EXPECT_EQ(code_of([] { field_from_json(Json::parse(R"({"kind":"weird"})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { field_from_json(Json::parse(R"({"kind":"prime"})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { field_from_json(Json(3)); }), ErrorCode::ParseError);
}

TEST(MatrixJson, RoundTrip) {
  std::mt19937_64 rng(73);
  for (const FieldSpec &k : {rationals(), gf(5), gf(2, 2)}) {
    const TriMat a = vwidth::testing::random_trimat(k, 4, rng);
    EXPECT_EQ(matrix_from_json(matrix_to_json(a)), a);
    EXPECT_EQ(matrix_from_json(Json::parse(matrix_to_json(a).dump())), a);
  }
}

TEST(MatrixJson, InputForms) {
  const FieldSpec k = gf(3);
  const TriMat expected = mat_from_ints(k, {{1, 1}, {0, 2}});
  EXPECT_EQ(matrix_from_json(Json::parse(R"({"field":"gf3","n":2,"entries":[[1,1],[0,2]]})")), expected);
  EXPECT_EQ(matrix_from_json(Json::parse(R"({"field":"gf3","n":2,"entries":[["1","1"],["2"]]})")), expected);
  EXPECT_EQ(matrix_from_json(Json::parse(R"([[1,1],[0,2]])"), k), expected);
  EXPECT_EQ(matrix_from_json(Json::parse(R"({"field":"q","n":1,"entries":[["-3/6"]]})")),
            mat_from_strings(rationals(), {{"-1/2"}}));
}

TEST(MatrixJson, Errors) {
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"([[1,1],[0,2]])"), std::nullopt); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"field":"gf3","n":2})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"field":"gf3","n":2,"entries":[[1,1]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"field":"gf3","n":2,"entries":[[1,1,1],[0,1]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"field":"gf3","n":2,"entries":[[1,1],[0,true]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"field":"gf3","n":2,"entries":[[1,0],[1,1]]})")); }),
            ErrorCode::NotTriangular);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"field":"gf3","n":0,"entries":[]})")); }),
            ErrorCode::BadSize);
}

TEST(FinitaryJson, RoundTripNormalises) {
  const FieldSpec k = gf(3);
  const FinitaryMat f = fin_make(mat_from_ints(k, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}));
  const Json j = finitary_to_json(f);
  EXPECT_EQ(j.at("corner_n"), 2);
  EXPECT_EQ(finitary_from_json(j), f);
  const Json padded = Json::parse(R"({"field":"gf3","corner_n":3,"entries":[[1,1,0],[0,1,0],[0,0,1]]})");
  EXPECT_EQ(finitary_from_json(padded), f);
}

TEST(WitnessJson, PowerRoundTrip) {
  const TriMat a = mat_from_ints(gf(3), {{1, 1}, {0, 1}});
  const PowerWitness w = power_decompose(a, 3);
  const PowerWitness back = witness_from_json(Json::parse(witness_to_json(w).dump()));
  EXPECT_EQ(back.s, w.s);
  EXPECT_EQ(back.factors, w.factors);
  EXPECT_EQ(back.case_label, "b");
  EXPECT_TRUE(verify_witness(back, a));
}

TEST(WitnessJson, WordRoundTrip) {
  const TriMat c = mat_from_ints(gf(3), {{1, 1}, {0, 1}});
  const WordWitness w = outer_witness(parse_word("[x1,x2]"), c);
  const WordWitness back = word_witness_from_json(Json::parse(word_witness_to_json(w).dump()));
  EXPECT_EQ(back.word, w.word);
  EXPECT_EQ(back.assign, w.assign);
  EXPECT_TRUE(verify_word_witness(back, c));
  EXPECT_EQ(code_of([] { word_witness_from_json(Json::parse(R"({"word":"[x1,x2]","assign":{"y":1}})")); }),
            ErrorCode::ParseError);
}

TEST(DescriptorJson, Fields) {
  const Json d = descriptor_to_json(verbal_descriptor(parse_word("x^6"), gf(3), 4));
  EXPECT_EQ(d.at("kind"), "level");
  EXPECT_EQ(d.at("level"), 3);
  EXPECT_EQ(d.at("s"), 6);
  EXPECT_EQ(d.at("case"), "reduces-to-unipotent");
  const Json o = descriptor_to_json(verbal_descriptor(parse_word("[x1,x2]"), gf(3), 4));
  EXPECT_TRUE(o.at("s").is_null());
}

TEST(GridJson, ProductAndCells) {
  const auto grid = grid_from_json(Json::parse(
      R"({"fields":["gf2","gf3"],"sizes":[2,3],"words":["x^2"],"cells":[{"field":"gf4","n":3,"word":"[x1,x2]"}]})"));
  ASSERT_EQ(grid.size(), 5U);
  EXPECT_EQ(grid[0].spec, gf(2));
  EXPECT_EQ(grid[3].n, 3U);
  EXPECT_EQ(grid[4].spec, gf(2, 2));
  EXPECT_EQ(grid[4].word, "[x1,x2]");
  EXPECT_TRUE(grid_from_json(Json::object()).empty());
}

TEST(GridJson, Malformed) {
  EXPECT_EQ(code_of([] { grid_from_json(Json::parse(R"([1,2])")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { grid_from_json(Json::parse(R"({"fields":["gf2"],"words":["x^2"]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { grid_from_json(Json::parse(R"({"cells":[{"field":"gf2","n":2,"word":"[x1"}]})")); }),
            ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { grid_from_json(Json::parse(R"({"cells":[{"field":"gf2","n":0,"word":"x1"}]})")); }),
            ErrorCode::BadSize);
}

TEST(ReportJson, Keys) {
  const CellReport r = cross_validate_cell({gf(3), 2, "x^3"});
  const Json j = report_to_json(r);
  for (const char *key : {"q", "n", "word", "predicted", "exact", "descriptor_ok", "witnesses_ok"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("exact"), 2);
  EXPECT_FALSE(j.contains("detail"));
}
