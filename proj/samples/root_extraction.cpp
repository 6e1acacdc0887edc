// Cube roots of random matrices in T_5(GF(7)) and a square root over Q.

#include "vwidth/vwidth.hpp"

#include <iostream>
#include <random>

using namespace vwidth;

int main() {
  const FieldSpec k = gf(7);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long long> entry(0, 6), unit(1, 6);

  std::vector<std::vector<FieldElem>> rows(5, std::vector<FieldElem>(5, FieldElem::zero(k)));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j)
      rows[i][j] = FieldElem::from_int(k, i == j ? unit(rng) : entry(rng));
  const TriMat a = mat_make(k, 5, rows).pow(3);

  const TriMat c = root_extract_coprime(a, 3);
  std::cout << "a =\n" << a.to_string() << "\ncube root =\n" << c.to_string() << '\n';
  std::cout << "c^3 == a: " << std::boolalpha << (c.pow(3) == a) << "\n\n";

  const FieldSpec q = rationals();
  const TriMat b = mat_from_strings(q, {{"4", "1", "2"}, {"0", "9", "3"}, {"0", "0", "16"}});
  const TriMat r = root_extract_coprime(b, 2);
  std::cout << "b =\n" << b.to_string() << "\nsquare root =\n" << r.to_string() << '\n';
  std::cout << "r^2 == b: " << (r.pow(2) == b) << '\n';
  return r.pow(2) == b && c.pow(3) == a ? 0 : 1;
}
