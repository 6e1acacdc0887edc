#pragma once

#include "vwidth/vwidth.hpp"

#include <random>

namespace vwidth::testing {

inline FieldElem random_elem(const FieldSpec &spec, std::mt19937_64 &rng, bool nonzero = false) {
  if (!spec.is_finite()) {
    std::uniform_int_distribution<long long> num(-9, 9), den(1, 5);
    FieldElem x = FieldElem::zero(spec);
    do {
      x = FieldElem::from_rational(spec, Rational(num(rng), den(rng)));
    } while (nonzero && x.is_zero());
    return x;
  }
  std::uniform_int_distribution<std::uint32_t> pick(nonzero ? 1 : 0, spec.q() - 1);
  return FieldElem::from_code(spec, pick(rng));
}

inline TriMat random_trimat(const FieldSpec &spec, std::size_t n, std::mt19937_64 &rng) {
  TriArray a(spec, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      a.set(i, j, random_elem(spec, rng, i == j));
  return TriMat::from_array(std::move(a));
}

/// Unitriangular with the first level-1 superdiagonals zero.
inline TriMat random_level(const FieldSpec &spec, std::size_t n, std::size_t level, std::mt19937_64 &rng) {
  TriArray a = TriArray::identity(spec, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + level; j < n; ++j)
      a.set(i, j, random_elem(spec, rng));
  return TriMat::from_array(std::move(a));
}

inline TriArray random_strictly_upper(const FieldSpec &spec, std::size_t n, std::mt19937_64 &rng) {
  TriArray a(spec, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      a.set(i, j, random_elem(spec, rng));
  return a;
}

} // namespace vwidth::testing
