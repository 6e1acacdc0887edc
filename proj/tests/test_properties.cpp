// Algebraic identities checked on seeded random inputs.

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace vwidth;
using vwidth::testing::random_strictly_upper;
using vwidth::testing::random_trimat;

namespace {

TriArray array_pow(const TriArray &m, std::uint64_t e) {
  TriArray out = TriArray::identity(m.spec(), m.n());
  for (std::uint64_t i = 0; i < e; ++i)
    out = out * m;
  return out;
}

} // namespace

TEST(Properties, FrobeniusOnUnipotents) {
  // (e + M)^(p^t) = e + M^(p^t) for strictly upper M in characteristic p
  std::mt19937_64 rng(101);
  for (const FieldSpec &k : {gf(2), gf(3), gf(2, 2)}) {
    const std::uint64_t p = k.p();
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 2 + trial % 7;
      const std::uint64_t pt = trial % 3 == 2 ? p * p : p;
      const TriArray m = random_strictly_upper(k, n, rng);
      const TriMat u = TriMat::from_array(TriArray::identity(k, n) + m);
      EXPECT_EQ(u.pow(static_cast<long long>(pt)).array(), TriArray::identity(k, n) + array_pow(m, pt))
          << k.name() << " n=" << n;
    }
  }
}

TEST(Properties, CommutatorInverse) {
  std::mt19937_64 rng(103);
  const std::vector<FieldSpec> fields{gf(2), gf(3), gf(2, 2), gf(7), rationals()};
  for (int trial = 0; trial < 500; ++trial) {
    const FieldSpec &k = fields[static_cast<std::size_t>(trial) % fields.size()];
    const std::size_t n = 1 + trial % 6;
    const TriMat a = random_trimat(k, n, rng), b = random_trimat(k, n, rng);
    EXPECT_EQ(commutator(a, b).inverse(), commutator(b, a));
  }
}

TEST(Properties, ValueSetsAreInverseClosedOnTheGrid) {
  for (const char *field : {"gf2", "gf3", "gf4", "gf5"}) {
    const FieldSpec k = parse_field_shorthand(field);
    for (std::size_t n = 2; n <= 4; ++n) {
      const BruteGroup g(k, n);
      for (std::uint64_t s = 1; s <= 8; ++s) {
        const ElemSet values = brute_value_set(g, Word::power(s));
        EXPECT_TRUE(is_inverse_closed(g, values)) << field << " n=" << n << " s=" << s;
      }
    }
  }
}

TEST(Properties, PowerValueSetsAreConjugationInvariant) {
  const BruteGroup g(gf(3), 3);
  const ElemSet values = brute_value_set(g, Word::power(3));
  std::mt19937_64 rng(107);
  std::uniform_int_distribution<BruteGroup::Elem> pick(0, static_cast<BruteGroup::Elem>(g.order() - 1));
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = values.elements()[static_cast<std::size_t>(trial) % values.size()];
    const auto y = pick(rng);
    EXPECT_TRUE(values.contains(g.mul(g.mul(g.inv(y), x), y)));
  }
}

TEST(Properties, HallWittIdentity) {
  // [[x, y^-1], z]^y [[y, z^-1], x]^z [[z, x^-1], y]^x = e
  std::mt19937_64 rng(109);
  auto conj = [](const TriMat &a, const TriMat &b) { return b.inverse() * a * b; };
  for (const FieldSpec &k : {gf(3), gf(2, 2), rationals()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + trial % 4;
      const TriMat x = random_trimat(k, n, rng), y = random_trimat(k, n, rng), z = random_trimat(k, n, rng);
      const TriMat t = conj(commutator(commutator(x, y.inverse()), z), y) *
                       conj(commutator(commutator(y, z.inverse()), x), z) *
                       conj(commutator(commutator(z, x.inverse()), y), x);
      EXPECT_TRUE(t.is_identity());
    }
  }
}

TEST(Properties, DiagonalOfPowerIsPowerOfDiagonal) {
  std::mt19937_64 rng(113);
  for (const FieldSpec &k : {gf(5), gf(3, 2), rationals()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const TriMat a = random_trimat(k, 4, rng);
      const long long s = 1 + trial % 9;
      const TriMat as = a.pow(s);
      for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(as.at(i, i), a.at(i, i).pow(s));
    }
  }
}
