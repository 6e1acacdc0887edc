#pragma once

// Width of power-word verbal subgroups of T_n(K) and FT(K), with explicit
// witnesses: every element of v(T_n(K), x^s) is written as c^s or g^s h^s.

#include "vwidth/error.hpp"
#include "vwidth/field.hpp"
#include "vwidth/trimat.hpp"
#include "vwidth/words.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vwidth {

struct WidthPrediction {
  int width = 0;
  std::string case_label; // "a", "b" or "c"
};

/// Predicted wid(T_n(K), x^s), or wid(FT(K), x^s) when `finitary` is set.
/// Width 0 means the verbal subgroup is trivial.
inline WidthPrediction width_predict(const FieldSpec &spec, std::size_t n, std::uint64_t s, bool finitary = false) {
  if (s < 1)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  if (!spec.is_finite() || s % spec.p() != 0) {
    if (finitary)
      return {1, "a"};
    const bool trivial = n <= 1 && spec.is_finite() && s % (spec.q() - 1) == 0;
    return {trivial ? 0 : 1, "a"};
  }
  if (finitary)
    return {2, "b"};
  if (s % (spec.q() - 1) != 0)
    return {n <= 1 ? 1 : 2, "b"};
  const std::uint64_t pt = detail::saturating_pow(spec.p(), detail::p_valuation(s, spec.p()), n + 3);
  if (pt >= n)
    return {0, "c"};
  if (n <= pt + 2)
    return {1, "c"};
  return {2, "c"};
}

/// Certificate that target = factors[0]^s * ... * factors[last]^s.
struct PowerWitness {
  std::uint64_t s = 1;
  std::vector<TriMat> factors;
  std::string case_label; // "a" | "b" | "c"
  std::string strategy;   // "paper" | "diag-sep" | "search"
};

inline TriMat witness_product(const PowerWitness &w, const FieldSpec &spec, std::size_t n) {
  TriMat out = TriMat::identity(spec, n);
  for (const auto &f : w.factors)
    out = out * f.pow(static_cast<long long>(w.s));
  return out;
}

inline bool verify_witness(const PowerWitness &w, const TriMat &target) {
  for (const auto &f : w.factors)
    if (f.spec() != target.spec() || f.n() != target.n())
      return false;
  return witness_product(w, target.spec(), target.n()) == target;
}

struct PowerSearchOptions {
  std::uint64_t root_search_budget = 200'000; // nodes per complete root search
  std::uint64_t max_trials = 1'000'000;       // hard cap for bounded searches
  std::uint64_t exhaustive_cap = 1U << 20;    // largest candidate space searched outright
  std::optional<std::size_t> finitary_pad;    // default p^t
};

namespace detail {

/// sum_{k=0}^{s-1} delta^k C^{s-1-k}, by doubling on s.
inline TriArray geometric_block_sum(const TriArray &c, const FieldElem &delta, std::uint64_t s) {
  const FieldSpec &spec = c.spec();
  const std::size_t n = c.n();
  const TriArray id = TriArray::identity(spec, n);
  TriArray sum = id;  // S(m)
  TriArray cpow = c;  // C^m
  FieldElem dpow = delta;
  int top = 63;
  while (top > 0 && !((s >> top) & 1U))
    --top;
  for (int bit = top - 1; bit >= 0; --bit) {
    sum = sum * cpow + dpow * sum;
    cpow = cpow * cpow;
    dpow = dpow * dpow;
    if ((s >> bit) & 1U) {
      sum = sum * c + dpow * id;
      cpow = cpow * c;
      dpow = dpow * delta;
    }
  }
  return sum;
}

inline bool diagonal_in_powers(const TriMat &a, std::uint64_t s) {
  for (std::size_t i = 0; i < a.n(); ++i)
    if (!is_sth_power(a.at(i, i), s))
      return false;
  return true;
}

/// Column-by-column s-th root with canonical diagonal roots. Returns nothing
/// when some f met on the way has a zero diagonal entry.
inline std::optional<TriMat> coherent_root(const TriMat &a, std::uint64_t s) {
  const std::size_t n = a.n();
  const FieldSpec &spec = a.spec();
  TriArray c(spec, n);
  for (std::size_t i = 0; i < n; ++i)
    c.set(i, i, canonical_sth_root(a.at(i, i), s));
  for (std::size_t j = 1; j < n; ++j) {
    const TriArray f = geometric_block_sum(c.block(j), c.at(j, j), s);
    for (std::size_t i = j; i-- > 0;) {
      if (f.at(i, i).is_zero())
        return std::nullopt;
      FieldElem rhs = a.at(i, j);
      for (std::size_t k = i + 1; k < j; ++k)
        rhs -= f.at(i, k) * c.at(k, j);
      c.set(i, j, rhs / f.at(i, i));
    }
  }
  return TriMat::from_array(std::move(c));
}

enum class SearchStatus { Found, NotFound, BudgetExceeded };

struct RootSearchResult {
  SearchStatus status = SearchStatus::NotFound;
  TriMat root;
};

/// Complete backtracking search for c with c^s = a over a finite field:
/// every diagonal root choice and every solution of the (possibly singular)
/// triangular system for each new column.
class RootSearcher {
public:
  RootSearcher(const TriMat &a, std::uint64_t s, std::uint64_t budget)
      : a_(a), s_(s), budget_(budget), c_(a.spec(), a.n()) {}

  RootSearchResult run() {
    if (!diagonal_in_powers(a_, s_))
      return {SearchStatus::NotFound, {}};
    if (column(0))
      return {SearchStatus::Found, TriMat::from_array(c_)};
    return {budget_hit_ ? SearchStatus::BudgetExceeded : SearchStatus::NotFound, {}};
  }

private:
  bool column(std::size_t j) {
    if (j == a_.n())
      return true;
    std::vector<FieldElem> roots = all_sth_roots(a_.at(j, j), s_);
    const FieldElem canon = canonical_sth_root(a_.at(j, j), s_);
    std::stable_partition(roots.begin(), roots.end(), [&](const FieldElem &r) { return r == canon; });
    for (const auto &delta : roots) {
      c_.set(j, j, delta);
      const TriArray f = geometric_block_sum(c_.block(j), delta, s_);
      if (rows(j, f, j))
        return true;
      if (budget_hit_)
        return false;
    }
    return false;
  }

  // Solves row i-1 of f d = a[0..j-1][j], rows from the bottom up.
  bool rows(std::size_t j, const TriArray &f, std::size_t i) {
    if (i == 0)
      return column(j + 1);
    if (++nodes_ > budget_) {
      budget_hit_ = true;
      return false;
    }
    const std::size_t row = i - 1;
    FieldElem rhs = a_.at(row, j);
    for (std::size_t k = row + 1; k < j; ++k)
      rhs -= f.at(row, k) * c_.at(k, j);
    if (!f.at(row, row).is_zero()) {
      c_.set(row, j, rhs / f.at(row, row));
      return rows(j, f, i - 1);
    }
    if (!rhs.is_zero())
      return false;
    const FieldSpec &spec = a_.spec();
    for (std::uint32_t code = 0; code < spec.q(); ++code) {
      c_.set(row, j, FieldElem::from_code(spec, code));
      if (rows(j, f, i - 1))
        return true;
      if (budget_hit_)
        return false;
    }
    return false;
  }

  const TriMat &a_;
  std::uint64_t s_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
  TriArray c_;
};

inline FieldElem first_non_root_of_unity(const FieldSpec &spec, std::uint64_t s) {
  if (!spec.is_finite())
    return FieldElem::from_int(spec, 2);
  for (std::uint32_t code = 1; code < spec.q(); ++code) {
    const FieldElem beta = FieldElem::from_code(spec, code);
    if (!beta.pow(static_cast<long long>(s % (spec.q() - 1))).is_one())
      return beta;
  }
  throw Error(ErrorCode::SearchExhausted, "every element of K* is an s-th root of unity");
}

/// Trailing block of a, rows/columns [k, n).
inline TriMat trailing_block(const TriMat &a, std::size_t k) {
  TriArray out(a.spec(), a.n() - k);
  for (std::size_t i = k; i < a.n(); ++i)
    for (std::size_t j = i; j < a.n(); ++j)
      out.set(i - k, j - k, a.at(i, j));
  return TriMat::from_array(std::move(out));
}

inline std::uint64_t ut_exponent(std::uint64_t p, std::size_t n) {
  std::uint64_t e = 1;
  while (e < n)
    e *= p;
  return e;
}

} // namespace detail

/// Decides whether `a` is a single s-th power. Over Q, and over finite fields
/// with p not dividing s, the coherent construction is complete; otherwise a
/// complete backtracking search runs within `budget` nodes.
inline detail::RootSearchResult find_sth_root(const TriMat &a, std::uint64_t s, std::uint64_t budget = 200'000) {
  const FieldSpec &spec = a.spec();
  if (!spec.is_finite() || s % spec.p() != 0) {
    if (!detail::diagonal_in_powers(a, s))
      return {detail::SearchStatus::NotFound, {}};
    auto root = detail::coherent_root(a, s);
    ensure(root.has_value(), "coherent root failed for exponent prime to p");
    return {detail::SearchStatus::Found, *root};
  }
  return detail::RootSearcher(a, s, budget).run();
}

/// c with c^s = a, for s prime to the characteristic (any s over Q). The
/// diagonal of c holds the canonical roots of the diagonal of a; columns are
/// appended left to right by back substitution against
/// f = c^{s-1} + delta c^{s-2} + ... + delta^{s-1} e.
inline TriMat root_extract_coprime(const TriMat &a, std::uint64_t s) {
  if (s < 1)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  const FieldSpec &spec = a.spec();
  if (spec.is_finite() && s % spec.p() == 0)
    throw Error(ErrorCode::NotCoprimeExponent, "characteristic divides " + std::to_string(s));
  if (!detail::diagonal_in_powers(a, s))
    throw Error(ErrorCode::NotInVerbal, "diagonal entries are not all " + std::to_string(s) + "-th powers");
  auto root = detail::coherent_root(a, s);
  ensure(root.has_value(), "zero diagonal entry in f for exponent prime to p");
  ensure(root->pow(static_cast<long long>(s)) == a, "root extraction failed to verify");
  return *root;
}

namespace detail {

/// g = diag(beta^-1 m1, m2), h = (beta e_k, X; 0, e) with g^s h^s = a, when
/// the diagonal blocks of a split at k are single s-th powers m1^s, m2^s.
inline std::optional<PowerWitness> split_construction(const TriMat &a, std::uint64_t s, std::size_t k,
                                                      const FieldElem &beta, std::uint64_t budget) {
  const FieldSpec &spec = a.spec();
  const std::size_t n = a.n();
  const TriMat top = a.principal_block(k);
  const TriMat bottom = trailing_block(a, k);
  const auto m1 = find_sth_root(top, s, budget);
  if (m1.status != SearchStatus::Found)
    return std::nullopt;
  const auto m2 = find_sth_root(bottom, s, budget);
  if (m2.status != SearchStatus::Found)
    return std::nullopt;

  // beta^s != 1, so beta != 1 and the geometric sum is (beta^s - 1) / (beta - 1)
  const auto reduced = static_cast<long long>(spec.is_finite() ? s % (spec.q() - 1) : s);
  const FieldElem beta_s = beta.pow(reduced);
  const FieldElem geo = (beta_s - FieldElem::one(spec)) / (beta - FieldElem::one(spec));
  if (geo.is_zero())
    return std::nullopt;
  const FieldElem scale = beta_s / geo;
  const TriMat top_inv = top.inverse();

  TriArray g(spec, n), h = TriArray::identity(spec, n);
  const FieldElem beta_inv = beta.inv();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j)
      g.set(i, j, beta_inv * m1.root.at(i, j));
    h.set(i, i, beta);
  }
  for (std::size_t i = k; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      g.set(i, j, m2.root.at(i - k, j - k));
  // X = beta^s / geo * A^{-1} B
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = k; j < n; ++j) {
      FieldElem acc = FieldElem::zero(spec);
      for (std::size_t l = i; l < k; ++l)
        acc += top_inv.at(i, l) * a.at(l, j);
      h.set(i, j, scale * acc);
    }
  PowerWitness w;
  w.s = s;
  w.factors = {TriMat::from_array(std::move(g)), TriMat::from_array(std::move(h))};
  w.case_label = "b";
  w.strategy = "paper";
  if (!verify_witness(w, a))
    return std::nullopt;
  return w;
}

/// a = d (d^-1 a) with d diagonal in (K*)^s and d^-1 a of pairwise distinct
/// diagonal entries, hence a single s-th power.
inline std::optional<PowerWitness> diagonal_separation(const TriMat &a, std::uint64_t s) {
  const FieldSpec &spec = a.spec();
  const std::size_t n = a.n();
  if (!spec.is_finite())
    return std::nullopt;
  std::vector<FieldElem> powers;
  for (std::uint32_t code = 1; code < spec.q(); ++code) {
    const FieldElem x = FieldElem::from_code(spec, code);
    if (is_sth_power(x, s))
      powers.push_back(x);
  }
  if (powers.size() < n)
    return std::nullopt;
  TriArray d(spec, n), g(spec, n);
  for (std::size_t i = 0; i < n; ++i) {
    d.set(i, i, a.at(i, i) / powers[i]);
    g.set(i, i, canonical_sth_root(d.at(i, i), s));
  }
  const TriMat dmat = TriMat::from_array(std::move(d));
  const TriMat rest = dmat.inverse() * a;
  auto h = coherent_root(rest, s);
  if (!h)
    return std::nullopt;
  PowerWitness w;
  w.s = s;
  w.factors = {TriMat::from_array(std::move(g)), *h};
  w.case_label = "b";
  w.strategy = "diag-sep";
  if (!verify_witness(w, a))
    return std::nullopt;
  return w;
}

/// Candidate first factors: diagonal plus first superdiagonal (diagonal fixed
/// to 1 when `unipotent`), then, if that space is exhausted and small enough,
/// the whole group in enumeration order.
template <class Visit>
inline bool for_each_candidate(const FieldSpec &spec, std::size_t n, bool unipotent,
                               const PowerSearchOptions &opts, std::uint64_t &trials, Visit &&visit) {
  const std::uint32_t q = spec.q();
  const std::size_t diag_slots = unipotent ? 0 : n;
  const std::size_t slots = diag_slots + (n - 1);
  std::vector<std::uint32_t> digit(slots, 0);
  while (true) {
    if (++trials > opts.max_trials)
      return false;
    TriArray g = TriArray::identity(spec, n);
    for (std::size_t i = 0; i < diag_slots; ++i)
      g.set(i, i, FieldElem::from_code(spec, digit[i] + 1));
    for (std::size_t i = 0; i + 1 < n; ++i)
      g.set(i, i + 1, FieldElem::from_code(spec, digit[diag_slots + i]));
    if (visit(TriMat::from_array(std::move(g))))
      return true;
    std::size_t pos = slots;
    while (pos > 0) {
      --pos;
      const std::uint32_t radix = pos < diag_slots ? q - 1 : q;
      if (++digit[pos] < radix)
        break;
      digit[pos] = 0;
      if (pos == 0) {
        pos = slots + 1;
        break;
      }
    }
    if (pos == slots + 1 || slots == 0)
      break;
  }
  long double full = 1;
  for (std::size_t i = 0; i < n; ++i)
    full *= unipotent ? 1 : (q - 1);
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i)
    full *= q;
  if (full > static_cast<long double>(opts.exhaustive_cap))
    return false;
  const GroupEnumerator all(spec, n, unipotent ? GroupKind::Unitriangular : GroupKind::Full, 1, opts.exhaustive_cap);
  for (std::uint64_t idx = 0; idx < all.size(); ++idx) {
    if (++trials > opts.max_trials)
      return false;
    if (visit(all.at(idx)))
      return true;
  }
  return false;
}

inline std::string describe_search(std::uint64_t trials) {
  return "no witness after " + std::to_string(trials) + " candidate trials";
}

} // namespace detail

/// g^s h^s = a for s divisible by p. Strategy ladder: block construction
/// (leading (n-1)-block split first), diagonal separation, bounded search.
inline PowerWitness two_power_decompose(const TriMat &a, std::uint64_t s, const PowerSearchOptions &opts = {}) {
  if (s < 1)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  const FieldSpec &spec = a.spec();
  const std::size_t n = a.n();
  if (!membership(a, verbal_descriptor(Word::power(s), spec, n)))
    throw Error(ErrorCode::NotInVerbal, "matrix is not in v(T_n, x^" + std::to_string(s) + ")");
  const TriMat id = TriMat::identity(spec, n);
  if (!spec.is_finite() || s % spec.p() != 0) {
    PowerWitness w{s, {root_extract_coprime(a, s), id}, "a", "paper"};
    ensure(verify_witness(w, a), "degenerate two-power witness failed");
    return w;
  }
  const bool order_divides = s % (spec.q() - 1) == 0;
  if (a.is_identity())
    return PowerWitness{s, {id, id}, order_divides ? "c" : "b", "paper"};

  if (!order_divides && n >= 2) {
    const FieldElem beta = detail::first_non_root_of_unity(spec, s);
    for (std::size_t k = n - 1; k >= 1; --k)
      if (auto w = detail::split_construction(a, s, k, beta, opts.root_search_budget))
        return *w;
    if (auto w = detail::diagonal_separation(a, s))
      return *w;
  }

  std::uint64_t trials = 0;
  std::set<TriMat> seen;
  std::optional<PowerWitness> found;
  detail::for_each_candidate(spec, n, order_divides, opts, trials, [&](const TriMat &g) {
    const TriMat gs = g.pow(static_cast<long long>(s));
    if (!seen.insert(gs).second)
      return false;
    const auto rest = find_sth_root(gs.inverse() * a, s, opts.root_search_budget);
    if (rest.status != detail::SearchStatus::Found)
      return false;
    found = PowerWitness{s, {g, rest.root}, order_divides ? "c" : "b", "search"};
    return true;
  });
  if (!found)
    throw Error(ErrorCode::SearchExhausted, detail::describe_search(trials));
  ensure(verify_witness(*found, a), "two-power witness failed to verify");
  return *found;
}

namespace detail {

/// Solves sum_k coeff[i][k] y_k = rhs_i over K; free unknowns are set to 0.
inline std::optional<std::vector<FieldElem>> solve_linear(std::vector<std::vector<FieldElem>> rows,
                                                          std::vector<FieldElem> rhs, std::size_t unknowns,
                                                          const FieldSpec &spec) {
  const std::size_t m = rows.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < unknowns && r < m; ++col) {
    std::size_t piv = r;
    while (piv < m && rows[piv][col].is_zero())
      ++piv;
    if (piv == m)
      continue;
    std::swap(rows[piv], rows[r]);
    std::swap(rhs[piv], rhs[r]);
    const FieldElem inv = rows[r][col].inv();
    for (std::size_t c = col; c < unknowns; ++c)
      rows[r][c] = rows[r][c] * inv;
    rhs[r] = rhs[r] * inv;
    for (std::size_t other = 0; other < m; ++other) {
      if (other == r || rows[other][col].is_zero())
        continue;
      const FieldElem factor = rows[other][col];
      for (std::size_t c = col; c < unknowns; ++c)
        rows[other][c] -= factor * rows[r][c];
      rhs[other] -= factor * rhs[r];
    }
    pivot_col.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (!rhs[i].is_zero())
      return std::nullopt;
  std::vector<FieldElem> y(unknowns, FieldElem::zero(spec));
  for (std::size_t i = 0; i < r; ++i)
    y[pivot_col[i]] = rhs[i];
  return y;
}

inline TriArray array_pow(const TriArray &m, std::uint64_t e) {
  TriArray result = TriArray::identity(m.spec(), m.n());
  TriArray base = m;
  if (e >= m.n() && m.strictly_upper())
    return TriArray(m.spec(), m.n());
  while (e > 0) {
    if (e & 1U)
      result = result * base;
    e >>= 1U;
    if (e > 0)
      base = base * base;
  }
  return result;
}

/// Superdiagonal from the offset-pt windows, then each longer offset as a
/// linear system in the next diagonal of M.
inline std::optional<TriMat> structured_unipotent_root(const TriMat &u, std::size_t pt) {
  const FieldSpec &spec = u.spec();
  const std::size_t n = u.n();
  const std::size_t windows = n - pt; // window i covers superdiagonal slots i..i+pt-1
  const std::size_t slots = n - 1;
  std::vector<bool> forbidden(slots, false), zero(slots, false), assigned(slots, false);
  for (std::size_t i = 0; i < windows; ++i)
    if (!u.at(i, i + pt).is_zero())
      for (std::size_t k = i; k < i + pt; ++k)
        forbidden[k] = true;
  for (std::size_t i = 0; i < windows; ++i) {
    if (!u.at(i, i + pt).is_zero())
      continue;
    bool hit = false;
    for (std::size_t k = i; k < i + pt; ++k)
      hit = hit || zero[k];
    if (hit)
      continue;
    std::optional<std::size_t> choice;
    for (std::size_t k = i + pt; k-- > i;)
      if (!forbidden[k]) {
        choice = k;
        break;
      }
    if (!choice)
      return std::nullopt; // every slot of a zero window lies in a nonzero window
    zero[*choice] = true;
  }
  std::vector<FieldElem> x(slots, FieldElem::one(spec));
  for (std::size_t k = 0; k < slots; ++k)
    if (zero[k]) {
      x[k] = FieldElem::zero(spec);
      assigned[k] = true;
    }
  for (std::size_t i = 0; i < windows; ++i) {
    const FieldElem &target = u.at(i, i + pt);
    if (target.is_zero())
      continue;
    FieldElem prod = FieldElem::one(spec);
    for (std::size_t k = i; k + 1 < i + pt; ++k) {
      assigned[k] = true;
      prod *= x[k];
    }
    x[i + pt - 1] = target / prod;
    assigned[i + pt - 1] = true;
  }
  TriArray m(spec, n);
  for (std::size_t k = 0; k < slots; ++k)
    m.set(k, k + 1, x[k]);

  for (std::size_t d = 1; pt + d < n; ++d) {
    // unknowns y_k = m_{k, k+d+1}, k = 0..n-d-2; equations at (i, i+pt+d)
    const std::size_t unknowns = n - d - 1;
    const TriArray base = array_pow(m, pt);
    std::vector<std::vector<FieldElem>> rows;
    std::vector<FieldElem> rhs;
    for (std::size_t i = 0; i + pt + d < n; ++i) {
      std::vector<FieldElem> row(unknowns, FieldElem::zero(spec));
      for (std::size_t k = i; k < i + pt; ++k) {
        FieldElem coeff = FieldElem::one(spec);
        for (std::size_t l = i; l < k; ++l)
          coeff *= x[l];
        for (std::size_t l = k + d + 1; l < i + pt + d; ++l)
          coeff *= x[l];
        row[k] += coeff;
      }
      rows.push_back(std::move(row));
      rhs.push_back(u.at(i, i + pt + d) - base.at(i, i + pt + d));
    }
    auto y = solve_linear(std::move(rows), std::move(rhs), unknowns, spec);
    if (!y)
      return std::nullopt;
    for (std::size_t k = 0; k < unknowns; ++k)
      m.set(k, k + d + 1, (*y)[k]);
  }
  TriArray root = TriArray::identity(spec, n) + m;
  TriMat out = TriMat::from_array(std::move(root));
  if (out.pow(static_cast<long long>(pt)) != u)
    return std::nullopt;
  return out;
}

/// Complete search for M, one diagonal of M at a time: the offset-(pt+d)
/// entries of M^pt only involve diagonals 1..d+1 of M.
class LayeredUnipotentSearch {
public:
  LayeredUnipotentSearch(const TriMat &u, std::size_t pt, std::uint64_t budget)
      : u_(u), pt_(pt), budget_(budget), m_(u.spec(), u.n()) {}

  SearchStatus run() {
    if (layer(0, 0))
      return SearchStatus::Found;
    return budget_hit_ ? SearchStatus::BudgetExceeded : SearchStatus::NotFound;
  }

  TriMat root() const { return TriMat::from_array(TriArray::identity(u_.spec(), u_.n()) + m_); }

private:
  // layer d holds entries m_{k, k+d+1}; slot k within the layer
  bool layer(std::size_t d, std::size_t k) {
    const std::size_t n = u_.n();
    if (d + 1 >= n)
      return true;
    if (k + d + 1 >= n) {
      if (pt_ + d < n) {
        const TriArray pw = array_pow(m_, pt_);
        for (std::size_t i = 0; i + pt_ + d < n; ++i)
          if (pw.at(i, i + pt_ + d) != u_.at(i, i + pt_ + d))
            return false;
      } else {
        return true; // deeper layers do not reach any constrained entry
      }
      return layer(d + 1, 0);
    }
    const FieldSpec &spec = u_.spec();
    for (std::uint32_t code = 0; code < spec.q(); ++code) {
      if (++nodes_ > budget_) {
        budget_hit_ = true;
        return false;
      }
      m_.set(k, k + d + 1, FieldElem::from_code(spec, code));
      if (layer(d, k + 1))
        return true;
      if (budget_hit_)
        return false;
    }
    m_.set(k, k + d + 1, FieldElem::zero(spec));
    return false;
  }

  const TriMat &u_;
  std::size_t pt_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
  TriArray m_;
};

} // namespace detail

/// e + M with M^pt = u - e, for u in UT_n^pt and pt a power of the
/// characteristic; relies on (e + M)^pt = e + M^pt in characteristic p.
inline TriMat unipotent_ppower_root(const TriMat &u, std::uint64_t pt, const PowerSearchOptions &opts = {}) {
  const FieldSpec &spec = u.spec();
  if (!spec.is_finite())
    throw Error(ErrorCode::NotFinite, "unipotent p-power roots need positive characteristic");
  if (pt < 1)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  if (!is_level(u, pt > u.n() ? u.n() : static_cast<std::size_t>(pt)))
    throw Error(ErrorCode::NotLevel, "matrix is not in UT_n^" + std::to_string(pt));
  const std::size_t n = u.n();
  if (u.is_identity() || pt >= n)
    return TriMat::identity(spec, n);
  const auto p = static_cast<std::size_t>(pt);
  if (auto root = detail::structured_unipotent_root(u, p))
    return *root;
  detail::LayeredUnipotentSearch search(u, p, opts.max_trials);
  const auto status = search.run();
  if (status == detail::SearchStatus::Found) {
    TriMat root = search.root();
    ensure(root.pow(static_cast<long long>(pt)) == u, "layered unipotent root failed to verify");
    return root;
  }
  if (status == detail::SearchStatus::BudgetExceeded)
    throw Error(ErrorCode::SearchExhausted, "unipotent root search exceeded its budget");
  throw Error(ErrorCode::NoRoot, "no " + std::to_string(pt) + "-th root in UT_n");
}

namespace detail {

/// For s = p^t r with p not dividing r: the exponent j with (m^j)^s = m^pt
/// on UT_n, i.e. j r = 1 modulo the exponent of UT_n.
inline std::uint64_t unipotent_correction(const FieldSpec &spec, std::size_t n, std::uint64_t r) {
  const std::uint64_t e = ut_exponent(spec.p(), n);
  if (e <= 1)
    return 1;
  return mod_inverse(r % e, e);
}

inline std::optional<TriMat> case_c_single_root(const TriMat &a, std::uint64_t s, const PowerSearchOptions &opts) {
  const FieldSpec &spec = a.spec();
  const std::uint64_t t = p_valuation(s, spec.p());
  std::uint64_t pt = 1;
  for (std::uint64_t i = 0; i < t; ++i)
    pt = pt > a.n() ? pt : pt * spec.p();
  const std::uint64_t r = s / saturating_pow(spec.p(), t, UINT64_MAX / spec.p());
  try {
    const TriMat m = unipotent_ppower_root(a, pt, opts);
    const TriMat y = m.pow(static_cast<long long>(unipotent_correction(spec, a.n(), r)));
    if (y.pow(static_cast<long long>(s)) == a)
      return y;
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NoRoot && e.code() != ErrorCode::SearchExhausted)
      throw;
  }
  return std::nullopt;
}

} // namespace detail

/// Shortest witness the engine can certify for a in v(T_n(K), x^s).
inline PowerWitness power_decompose(const TriMat &a, std::uint64_t s, const PowerSearchOptions &opts = {}) {
  if (s < 1)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  const FieldSpec &spec = a.spec();
  const std::size_t n = a.n();
  if (!membership(a, verbal_descriptor(Word::power(s), spec, n)))
    throw Error(ErrorCode::NotInVerbal, "matrix is not in v(T_n, x^" + std::to_string(s) + ")");
  PowerWitness w;
  w.s = s;
  if (!spec.is_finite() || s % spec.p() != 0) {
    w.factors = {root_extract_coprime(a, s)};
    w.case_label = "a";
    w.strategy = "paper";
    return w;
  }
  if (s % (spec.q() - 1) != 0) {
    const auto single = find_sth_root(a, s, opts.root_search_budget);
    if (single.status == detail::SearchStatus::Found) {
      w.factors = {single.root};
      w.case_label = "b";
      w.strategy = "search";
      ensure(verify_witness(w, a), "single-root witness failed to verify");
      return w;
    }
    return two_power_decompose(a, s, opts);
  }
  w.case_label = "c";
  if (auto y = detail::case_c_single_root(a, s, opts)) {
    w.factors = {*y};
    w.strategy = "paper";
    ensure(verify_witness(w, a), "case (c) witness failed to verify");
    return w;
  }
  std::uint64_t trials = 0;
  std::set<TriMat> seen;
  std::optional<PowerWitness> found;
  detail::for_each_candidate(spec, n, true, opts, trials, [&](const TriMat &g) {
    const TriMat gs = g.pow(static_cast<long long>(s));
    if (!seen.insert(gs).second)
      return false;
    if (auto h = detail::case_c_single_root(gs.inverse() * a, s, opts)) {
      found = PowerWitness{s, {g, *h}, "c", "search"};
      return true;
    }
    return false;
  });
  if (!found)
    throw Error(ErrorCode::SearchExhausted, detail::describe_search(trials));
  ensure(verify_witness(*found, a), "case (c) two-power witness failed to verify");
  return *found;
}

/// Witness over FT(K); factors may live in larger corners than the target.
struct FinitaryPowerWitness {
  std::uint64_t s = 1;
  std::vector<FinitaryMat> factors;
  std::string case_label;
  std::string strategy;
};

inline bool verify_finitary_witness(const FinitaryPowerWitness &w, const FinitaryMat &target) {
  FinitaryMat acc = fin_identity(target.spec());
  for (const auto &f : w.factors) {
    if (f.spec() != target.spec())
      return false;
    acc = fin_mul(acc, fin_pow(f, static_cast<long long>(w.s)));
  }
  return acc == target;
}

/// Delegates to power_decompose on the corner, then retries a single s-th
/// root at corners m+1, ..., m+pad before settling for two factors.
inline FinitaryPowerWitness finitary_power_decompose(const FinitaryMat &f, std::uint64_t s,
                                                     const PowerSearchOptions &opts = {}) {
  const FieldSpec &spec = f.spec();
  const std::size_t m = f.corner_size();
  const PowerWitness base = power_decompose(f.corner(), s, opts);
  auto lift = [&](const PowerWitness &w) {
    FinitaryPowerWitness out{w.s, {}, w.case_label, w.strategy};
    for (const auto &factor : w.factors)
      out.factors.push_back(fin_make(factor));
    ensure(verify_finitary_witness(out, f), "finitary witness failed to verify");
    return out;
  };
  if (base.factors.size() == 1)
    return lift(base);
  std::size_t pad = 1;
  if (opts.finitary_pad) {
    pad = *opts.finitary_pad;
  } else if (spec.is_finite() && s % spec.p() == 0) {
    pad = static_cast<std::size_t>(detail::saturating_pow(spec.p(), detail::p_valuation(s, spec.p()), 64));
  }
  for (std::size_t extra = 1; extra <= pad; ++extra) {
    const TriMat bigger = fin_embed(f, m + extra);
    std::optional<TriMat> root;
    if (s % (spec.q() - 1) != 0) {
      const auto r = find_sth_root(bigger, s, opts.root_search_budget);
      if (r.status == detail::SearchStatus::Found)
        root = r.root;
    } else {
      root = detail::case_c_single_root(bigger, s, opts);
    }
    if (root) {
      PowerWitness w{s, {*root}, base.case_label, "search"};
      ensure(verify_witness(w, bigger), "enlarged-corner root failed to verify");
      return lift(w);
    }
  }
  return lift(base);
}

} // namespace vwidth
