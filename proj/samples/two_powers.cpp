// Every element of T_3(GF(3)) is a product of two cubes, and most are not
// a single cube.

#include "vwidth/vwidth.hpp"

#include <iostream>
#include <map>

using namespace vwidth;

int main() {
  const FieldSpec k = gf(3);
  const TriMat a = mat_from_ints(k, {{1, 1}, {0, 1}});
  const PowerWitness w = power_decompose(a, 3);
  std::cout << "[[1,1],[0,1]] over GF(3) as g^3 h^3:\n";
  for (const auto &f : w.factors)
    std::cout << f.to_string() << "\n\n";

  std::map<std::size_t, std::size_t> lengths;
  bool all_ok = true;
  for (const TriMat &b : enumerate_group(k, 3, GroupKind::Full)) {
    const PowerWitness pw = power_decompose(b, 3);
    all_ok = all_ok && verify_witness(pw, b);
    ++lengths[pw.factors.size()];
  }
  std::cout << "T_3(GF(3)), x^3:";
  for (auto [len, count] : lengths)
    std::cout << "  length " << len << ": " << count;
  std::cout << "\nexact width by brute force: " << exact_width(Word::power(3), k, 3) << '\n';
  return all_ok ? 0 : 1;
}
