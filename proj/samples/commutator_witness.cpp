// Writes a level-2 element of T_5(GF(5)) as a single value of
// [[x1,x2],[x3,x4]] and a level-4 element of T_5(GF(2)) the same way.

#include "vwidth/vwidth.hpp"

#include <iostream>

using namespace vwidth;

namespace {

bool show(const Word &w, const TriMat &c) {
  const WordWitness ww = outer_witness(w, c);
  std::cout << w.to_string() << " = \n" << c.to_string() << "\nwith\n";
  for (const auto &[var, m] : ww.assign)
    std::cout << "x" << var << " =\n" << m.to_string() << '\n';
  const bool ok = verify_word_witness(ww, c);
  std::cout << "verified: " << std::boolalpha << ok << "\n\n";
  return ok;
}

} // namespace

int main() {
  const Word w = parse_word("[[x1,x2],[x3,x4]]");
  const FieldSpec k5 = gf(5);
  const TriMat c5 = mat_from_ints(k5, {{1, 0, 2, 4, 1},
                                       {0, 1, 0, 3, 3},
                                       {0, 0, 1, 0, 1},
                                       {0, 0, 0, 1, 0},
                                       {0, 0, 0, 0, 1}});
  const FieldSpec k2 = gf(2);
  const TriMat c2 = mat_from_ints(k2, {{1, 0, 0, 0, 1},
                                       {0, 1, 0, 0, 0},
                                       {0, 0, 1, 0, 0},
                                       {0, 0, 0, 1, 0},
                                       {0, 0, 0, 0, 1}});
  const bool ok = show(w, c5) & show(w, c2);
  return ok ? 0 : 1;
}
