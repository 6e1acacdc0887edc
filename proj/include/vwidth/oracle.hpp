#pragma once

// Brute-force ground truth over T_n(GF(q)): value sets, generated subgroups,
// exact widths, and agreement checks against the constructive modules.
//
// Elements are packed into a dense mixed-radix index and multiplied with
// small field tables, independently of TriMat arithmetic.

#include "vwidth/commwidth.hpp"
#include "vwidth/error.hpp"
#include "vwidth/field.hpp"
#include "vwidth/powerwidth.hpp"
#include "vwidth/trimat.hpp"
#include "vwidth/words.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace vwidth {

inline constexpr std::uint64_t kOracleGuard = 5'000'000;        // |G|
inline constexpr std::uint64_t kOracleTupleGuard = 50'000'000;  // pairs tried for outer-word values

/// T_n(GF(q)) as packed indices.
class BruteGroup {
public:
  using Elem = std::uint32_t;
  static constexpr std::size_t kMaxN = 8;
  using Digits = std::array<std::uint8_t, kMaxN *(kMaxN + 1) / 2>;

  BruteGroup(const FieldSpec &spec, std::size_t n, std::uint64_t guard = kOracleGuard) : spec_(spec), n_(n) {
    if (!spec.is_finite())
      throw Error(ErrorCode::NotFinite, "brute force needs a finite field");
    if (n < 1)
      throw Error(ErrorCode::BadSize, "matrix size must be positive");
    q_ = spec.q();
    long double order = 1;
    for (std::size_t i = 0; i < n; ++i)
      order *= q_ - 1;
    for (std::size_t i = 0; i < n * (n - 1) / 2; ++i)
      order *= q_;
    if (n > kMaxN || order > static_cast<long double>(guard))
      throw Error(ErrorCode::GuardExceeded, "|T_" + std::to_string(n) + "(GF(" + std::to_string(q_) +
                                                "))| exceeds guard " + std::to_string(guard));
    order_ = static_cast<std::uint64_t>(order + 0.5L);
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.resize(q_);
    for (std::uint32_t x = 0; x < q_; ++x) {
      const FieldElem fx = FieldElem::from_code(spec, x);
      neg_[x] = static_cast<std::uint8_t>((-fx).code());
      inv_[x] = x == 0 ? 0 : static_cast<std::uint8_t>(fx.inv().code());
      for (std::uint32_t y = 0; y < q_; ++y) {
        const FieldElem fy = FieldElem::from_code(spec, y);
        add_[x * q_ + y] = static_cast<std::uint8_t>((fx + fy).code());
        mul_[x * q_ + y] = static_cast<std::uint8_t>((fx * fy).code());
      }
    }
    std::size_t slot = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        pos_[i][j] = slot++;
    slots_ = slot;
  }

  const FieldSpec &spec() const { return spec_; }
  std::size_t n() const { return n_; }
  std::uint64_t order() const { return order_; }
  std::uint32_t q() const { return q_; }

  // index: diagonal digits (code - 1, radix q - 1) first, then the strictly
  // upper entries row by row (radix q); last digit fastest
  Elem encode(const Digits &d) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i)
      idx = idx * (q_ - 1) + (d[pos_[i][i]] - 1U);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        idx = idx * q_ + d[pos_[i][j]];
    return static_cast<Elem>(idx);
  }

  Digits decode(Elem e) const {
    Digits d{};
    std::uint64_t idx = e;
    for (std::size_t i = n_; i-- > 0;)
      for (std::size_t j = n_; j-- > i + 1;) {
        d[pos_[i][j]] = static_cast<std::uint8_t>(idx % q_);
        idx /= q_;
      }
    for (std::size_t i = n_; i-- > 0;) {
      d[pos_[i][i]] = static_cast<std::uint8_t>(idx % (q_ - 1) + 1);
      idx /= q_ - 1;
    }
    return d;
  }

  Digits mul_digits(const Digits &a, const Digits &b) const {
    Digits c{};
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) {
        std::uint8_t acc = 0;
        for (std::size_t k = i; k <= j; ++k)
          acc = add_[acc * q_ + mul_[a[pos_[i][k]] * q_ + b[pos_[k][j]]]];
        c[pos_[i][j]] = acc;
      }
    return c;
  }

  Digits inv_digits(const Digits &a) const {
    Digits x{};
    for (std::size_t j = n_; j-- > 0;) {
      x[pos_[j][j]] = inv_[a[pos_[j][j]]];
      for (std::size_t i = j; i-- > 0;) {
        std::uint8_t acc = 0;
        for (std::size_t k = i + 1; k <= j; ++k)
          acc = add_[acc * q_ + mul_[a[pos_[i][k]] * q_ + x[pos_[k][j]]]];
        x[pos_[i][j]] = mul_[neg_[inv_[a[pos_[i][i]]]] * q_ + acc];
      }
    }
    return x;
  }

  Elem identity() const {
    Digits d{};
    for (std::size_t i = 0; i < n_; ++i)
      d[pos_[i][i]] = 1;
    return encode(d);
  }

  Elem mul(Elem a, Elem b) const { return encode(mul_digits(decode(a), decode(b))); }
  Elem inv(Elem a) const { return encode(inv_digits(decode(a))); }

  Elem pow(Elem a, std::uint64_t e) const {
    Digits result = decode(identity());
    Digits base = decode(a);
    while (e > 0) {
      if (e & 1U)
        result = mul_digits(result, base);
      e >>= 1U;
      if (e > 0)
        base = mul_digits(base, base);
    }
    return encode(result);
  }

  Elem commutator(Elem a, Elem b) const {
    const Digits da = decode(a), db = decode(b);
    return encode(mul_digits(mul_digits(inv_digits(da), inv_digits(db)), mul_digits(da, db)));
  }

  TriMat to_mat(Elem e) const {
    const Digits d = decode(e);
    TriArray a(spec_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        a.set(i, j, FieldElem::from_code(spec_, d[pos_[i][j]]));
    return TriMat::from_array(std::move(a));
  }

  Elem from_mat(const TriMat &m) const {
    if (m.spec() != spec_ || m.n() != n_)
      throw Error(ErrorCode::ContextMismatch, "matrix is not in this group");
    Digits d{};
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        d[pos_[i][j]] = static_cast<std::uint8_t>(m.at(i, j).code());
    return encode(d);
  }

  /// Conjugacy classes, by closing each element under conjugation by a
  /// generating set (diagonal primitive-element matrices and e + e_{i,i+1}).
  void compute_classes() const {
    if (!class_of_.empty())
      return;
    std::vector<std::pair<Digits, Digits>> gens;
    const std::uint8_t prim = static_cast<std::uint8_t>(primitive_element(spec_).code());
    const Digits id = decode(identity());
    for (std::size_t i = 0; i < n_; ++i) {
      if (q_ > 2) {
        Digits g = id;
        g[pos_[i][i]] = prim;
        gens.emplace_back(g, inv_digits(g));
      }
      if (i + 1 < n_) {
        Digits g = id;
        g[pos_[i][i + 1]] = 1;
        gens.emplace_back(g, inv_digits(g));
      }
    }
    constexpr Elem kUnset = ~Elem{0};
    class_of_.assign(order_, kUnset);
    members_.clear();
    members_.reserve(order_);
    class_start_.clear();
    for (std::uint64_t start = 0; start < order_; ++start) {
      if (class_of_[start] != kUnset)
        continue;
      const auto id_class = static_cast<Elem>(class_start_.size());
      class_start_.push_back(members_.size());
      class_of_[start] = id_class;
      members_.push_back(static_cast<Elem>(start));
      for (std::size_t head = class_start_.back(); head < members_.size(); ++head) {
        const Digits x = decode(members_[head]);
        for (const auto &[g, gi] : gens) {
          const Elem y = encode(mul_digits(mul_digits(g, x), gi));
          if (class_of_[y] == kUnset) {
            class_of_[y] = id_class;
            members_.push_back(y);
          }
        }
      }
    }
    class_start_.push_back(members_.size());
  }

  std::size_t class_count() const {
    compute_classes();
    return class_start_.size() - 1;
  }
  Elem class_of(Elem e) const {
    compute_classes();
    return class_of_[e];
  }
  /// Members of class c; the first one is its representative.
  std::pair<const Elem *, const Elem *> class_members(std::size_t c) const {
    compute_classes();
    return {members_.data() + class_start_[c], members_.data() + class_start_[c + 1]};
  }

private:
  FieldSpec spec_;
  std::size_t n_;
  std::uint32_t q_ = 0;
  std::uint64_t order_ = 0;
  std::size_t slots_ = 0;
  std::array<std::array<std::size_t, kMaxN>, kMaxN> pos_{};
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
  mutable std::vector<Elem> class_of_;
  mutable std::vector<Elem> members_;
  mutable std::vector<std::size_t> class_start_;
};

/// Subset of a BruteGroup as membership flags plus an element list.
class ElemSet {
public:
  explicit ElemSet(std::uint64_t universe = 0) : flags_(universe, 0) {}

  bool contains(BruteGroup::Elem e) const { return flags_[e] != 0; }
  bool insert(BruteGroup::Elem e) {
    if (flags_[e])
      return false;
    flags_[e] = 1;
    list_.push_back(e);
    return true;
  }
  std::size_t size() const { return list_.size(); }
  const std::vector<BruteGroup::Elem> &elements() const { return list_; }
  std::vector<BruteGroup::Elem> sorted() const {
    auto out = list_;
    std::sort(out.begin(), out.end());
    return out;
  }
  bool operator==(const ElemSet &o) const { return flags_ == o.flags_; }

private:
  std::vector<std::uint8_t> flags_;
  std::vector<BruteGroup::Elem> list_;
};

namespace detail {

inline void insert_class(const BruteGroup &g, BruteGroup::Elem e, ElemSet &out) {
  if (out.contains(e))
    return;
  auto [first, last] = g.class_members(g.class_of(e));
  for (auto it = first; it != last; ++it)
    out.insert(*it);
}

/// {[x, y] : x in u, y in G} for a conjugation-closed u: each class
/// representative x contributes x^{-1} times its own class.
inline ElemSet commutators_with_group(const BruteGroup &g, const ElemSet &u) {
  ElemSet out(g.order());
  std::vector<std::uint8_t> seen(g.class_count(), 0);
  for (auto x : u.elements()) {
    const auto c = g.class_of(x);
    if (seen[c])
      continue;
    seen[c] = 1;
    auto [first, last] = g.class_members(c);
    const auto rep = *first;
    const auto rep_inv = g.inv(rep);
    for (auto it = first; it != last; ++it)
      insert_class(g, g.mul(rep_inv, *it), out);
  }
  return out;
}

inline ElemSet inverses(const BruteGroup &g, const ElemSet &s) {
  ElemSet out(g.order());
  for (auto x : s.elements())
    out.insert(g.inv(x));
  return out;
}

inline ElemSet outer_values(const BruteGroup &g, const Word &w, std::uint64_t tuple_guard) {
  if (w.kind() == Word::Kind::Variable) {
    ElemSet all(g.order());
    for (std::uint64_t e = 0; e < g.order(); ++e)
      all.insert(static_cast<BruteGroup::Elem>(e));
    return all;
  }
  const Word &u = w.left();
  const Word &v = w.right();
  if (v.kind() == Word::Kind::Variable)
    return commutators_with_group(g, outer_values(g, u, tuple_guard));
  if (u.kind() == Word::Kind::Variable)
    return inverses(g, commutators_with_group(g, outer_values(g, v, tuple_guard)));
  const ElemSet left = outer_values(g, u, tuple_guard);
  const ElemSet right = outer_values(g, v, tuple_guard);
  std::vector<BruteGroup::Elem> reps;
  std::vector<std::uint8_t> seen(g.class_count(), 0);
  for (auto x : left.elements()) {
    const auto c = g.class_of(x);
    if (!seen[c]) {
      seen[c] = 1;
      reps.push_back(*g.class_members(c).first);
    }
  }
  const long double tuples = static_cast<long double>(reps.size()) * right.size();
  if (tuples > static_cast<long double>(tuple_guard))
    throw Error(ErrorCode::GuardExceeded, "outer-word value set needs " + std::to_string(static_cast<double>(tuples)) +
                                              " commutator evaluations, guard " + std::to_string(tuple_guard));
  ElemSet out(g.order());
  for (auto x : reps)
    for (auto y : right.elements())
      insert_class(g, g.commutator(x, y), out);
  return out;
}

} // namespace detail

/// All values of w on the group (x^s: all s-th powers).
inline ElemSet brute_value_set(const BruteGroup &g, const Word &w, std::uint64_t tuple_guard = kOracleTupleGuard) {
  if (w.is_power()) {
    ElemSet out(g.order());
    for (std::uint64_t e = 0; e < g.order(); ++e)
      out.insert(g.pow(static_cast<BruteGroup::Elem>(e), w.exponent()));
    return out;
  }
  if (!validate_outer(w))
    throw Error(ErrorCode::InvalidWord, w.to_string() + " repeats a variable");
  return detail::outer_values(g, w, tuple_guard);
}

inline bool is_inverse_closed(const BruteGroup &g, const ElemSet &s) {
  for (auto x : s.elements())
    if (!s.contains(g.inv(x)))
      return false;
  return true;
}

/// Subgroup generated by `gens` (Dimino: each new generator adds whole
/// cosets of the subgroup built so far).
inline ElemSet brute_closure(const BruteGroup &g, const std::vector<BruteGroup::Elem> &gens) {
  ElemSet out(g.order());
  out.insert(g.identity());
  std::vector<BruteGroup::Elem> accepted;
  for (auto gen : gens) {
    if (out.contains(gen))
      continue;
    accepted.push_back(gen);
    const std::vector<BruteGroup::Elem> previous = out.elements();
    std::vector<BruteGroup::Elem> reps{gen};
    for (auto h : previous)
      out.insert(g.mul(h, gen));
    for (std::size_t r = 0; r < reps.size(); ++r)
      for (auto s : accepted) {
        const auto t = g.mul(reps[r], s);
        if (out.contains(t))
          continue;
        reps.push_back(t);
        for (auto h : previous)
          out.insert(g.mul(h, t));
      }
  }
  for (auto x : out.elements())
    for (auto s : accepted)
      ensure(out.contains(g.mul(x, s)), "closure is not closed under products");
  return out;
}

/// Smallest m with (V u {e})^m = <V>, V conjugation-closed and inverse-closed.
inline std::size_t brute_width(const BruteGroup &g, const ElemSet &values, const ElemSet &subgroup) {
  if (subgroup.size() == 1)
    return 0;
  ElemSet reached(g.order());
  reached.insert(g.identity());
  for (std::size_t m = 1;; ++m) {
    ElemSet next = reached;
    std::vector<std::uint8_t> done(g.class_count(), 0);
    for (auto h : subgroup.elements()) {
      const auto c = g.class_of(h);
      if (done[c] || reached.contains(h))
        continue;
      done[c] = 1;
      const auto rep = *g.class_members(c).first;
      bool found = false;
      if (values.size() <= reached.size()) {
        for (auto v : values.elements())
          if (reached.contains(g.mul(g.inv(v), rep))) {
            found = true;
            break;
          }
      } else {
        for (auto w : reached.elements())
          if (values.contains(g.mul(rep, g.inv(w)))) {
            found = true;
            break;
          }
      }
      if (found)
        detail::insert_class(g, rep, next);
    }
    ensure(next.size() > reached.size(), "width chain stalled below the generated subgroup");
    reached = std::move(next);
    if (reached.size() == subgroup.size())
      return m;
  }
}

// TriMat-level entry points.

inline std::set<TriMat> value_set(const Word &w, const FieldSpec &spec, std::size_t n,
                                  std::uint64_t guard = kOracleGuard) {
  const BruteGroup g(spec, n, guard);
  const ElemSet vals = brute_value_set(g, w);
  ensure(is_inverse_closed(g, vals), "value set is not inverse-closed");
  std::set<TriMat> out;
  for (auto e : vals.elements())
    out.insert(g.to_mat(e));
  return out;
}

inline std::set<TriMat> generated_subgroup(const std::set<TriMat> &gens, std::uint64_t guard = kOracleGuard) {
  if (gens.empty())
    throw Error(ErrorCode::BadSize, "empty generating set has no group context");
  const TriMat &first = *gens.begin();
  const BruteGroup g(first.spec(), first.n(), guard);
  std::vector<BruteGroup::Elem> idx;
  for (const auto &m : gens)
    idx.push_back(g.from_mat(m));
  const ElemSet h = brute_closure(g, idx);
  std::set<TriMat> out;
  for (auto e : h.elements())
    out.insert(g.to_mat(e));
  return out;
}

inline std::size_t exact_width(const Word &w, const FieldSpec &spec, std::size_t n,
                               std::uint64_t guard = kOracleGuard) {
  const BruteGroup g(spec, n, guard);
  const ElemSet vals = brute_value_set(g, w);
  ensure(is_inverse_closed(g, vals), "value set is not inverse-closed");
  const ElemSet h = brute_closure(g, vals.sorted());
  return brute_width(g, vals, h);
}

/// Size of the set a descriptor describes, counted from its shape alone.
inline std::uint64_t descriptor_count(const VerbalDescriptor &d, const BruteGroup &g) {
  const std::uint64_t q = g.q();
  const std::size_t n = g.n();
  auto qpow = [&](std::size_t e) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < e; ++i)
      out *= q;
    return out;
  };
  switch (d.kind) {
  case VerbalKind::Trivial: return 1;
  case VerbalKind::Full: return g.order();
  case VerbalKind::Level: {
    std::size_t free = 0;
    for (std::size_t off = d.level; off < n; ++off)
      free += n - off;
    return qpow(free);
  }
  case VerbalKind::Power: {
    std::set<std::uint32_t> powers;
    for (std::uint32_t x = 1; x < q; ++x)
      powers.insert(FieldElem::from_code(g.spec(), x).pow(static_cast<long long>(d.exponent % (q - 1))).code());
    std::uint64_t out = qpow(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      out *= powers.size();
    return out;
  }
  }
  return 0;
}

struct GridCell {
  FieldSpec spec;
  std::size_t n = 1;
  std::string word;
};

struct CellReport {
  std::string field;
  std::uint64_t q = 0;
  std::size_t n = 0;
  std::string word;
  int predicted = -1;
  int exact = -1;
  bool descriptor_ok = false;
  bool witnesses_ok = false;
  bool inverse_closed = false;
  std::uint64_t subgroup_order = 0;
  std::uint64_t witnesses_checked = 0;
  std::string coverage; // "all" or "classes+sample"
  std::string detail;   // first failure, if any

  bool ok() const { return predicted == exact && descriptor_ok && witnesses_ok && inverse_closed; }
};

struct CrossValidateOptions {
  std::uint64_t guard = kOracleGuard;
  std::uint64_t tuple_guard = kOracleTupleGuard;
  std::uint64_t exhaustive_witness_limit = 100'000; // above this: class representatives + sample
  std::size_t sample_size = 2000;
  std::uint64_t seed = 0;
  PowerSearchOptions search;
};

namespace detail {

inline std::vector<BruteGroup::Elem> witness_targets(const BruteGroup &g, const ElemSet &h,
                                                     const CrossValidateOptions &opts, std::string &coverage) {
  if (h.size() <= opts.exhaustive_witness_limit) {
    coverage = "all";
    return h.sorted();
  }
  coverage = "classes+sample";
  std::vector<BruteGroup::Elem> out;
  std::vector<std::uint8_t> seen(g.class_count(), 0);
  for (auto e : h.sorted()) {
    const auto c = g.class_of(e);
    if (!seen[c]) {
      seen[c] = 1;
      out.push_back(*g.class_members(c).first);
    }
  }
  std::mt19937_64 rng(opts.seed);
  const auto &all = h.elements();
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (std::size_t i = 0; i < opts.sample_size; ++i)
    out.push_back(all[pick(rng)]);
  return out;
}

} // namespace detail

/// Compares prediction, descriptor and constructive witnesses with brute
/// force on one group and word.
inline CellReport cross_validate_cell(const BruteGroup &g, const GridCell &cell, const CrossValidateOptions &opts = {}) {
  if (g.spec() != cell.spec || g.n() != cell.n)
    throw Error(ErrorCode::ContextMismatch, "grid cell does not match the group");
  CellReport r;
  r.field = cell.spec.name();
  r.q = cell.spec.q();
  r.n = cell.n;
  r.word = cell.word;
  const Word w = parse_word(cell.word);
  const ElemSet vals = brute_value_set(g, w, opts.tuple_guard);
  r.inverse_closed = is_inverse_closed(g, vals);
  const ElemSet h = brute_closure(g, vals.sorted());
  r.subgroup_order = h.size();
  r.exact = static_cast<int>(brute_width(g, vals, h));
  r.predicted = w.is_power() ? width_predict(cell.spec, cell.n, w.exponent()).width
                             : outer_width_predict(w, cell.spec, cell.n);

  const VerbalDescriptor d = verbal_descriptor(w, cell.spec, cell.n);
  r.descriptor_ok = descriptor_count(d, g) == h.size();
  for (auto e : h.elements()) {
    if (!r.descriptor_ok)
      break;
    if (!membership(g.to_mat(e), d)) {
      r.descriptor_ok = false;
      r.detail = "closure element outside descriptor: " + g.to_mat(e).to_string();
    }
  }
  if (!r.descriptor_ok && r.detail.empty())
    r.detail = "descriptor counts " + std::to_string(descriptor_count(d, g)) + " elements, closure has " +
               std::to_string(h.size());

  r.witnesses_ok = true;
  const std::size_t max_len = static_cast<std::size_t>(std::max(r.predicted, 1));
  for (auto e : detail::witness_targets(g, h, opts, r.coverage)) {
    const TriMat target = g.to_mat(e);
    try {
      bool good;
      if (w.is_power()) {
        const PowerWitness pw = power_decompose(target, w.exponent(), opts.search);
        good = pw.factors.size() <= max_len && verify_witness(pw, target);
      } else {
        good = verify_word_witness(outer_witness(w, target), target);
      }
      ++r.witnesses_checked;
      if (!good) {
        r.witnesses_ok = false;
        r.detail = "witness failed for " + target.to_string();
        break;
      }
    } catch (const Error &err) {
      r.witnesses_ok = false;
      r.detail = std::string("witness error for ") + target.to_string() + ": " + err.what();
      break;
    }
  }
  if (r.ok())
    r.detail.clear();
  else if (r.detail.empty())
    r.detail = "predicted width " + std::to_string(r.predicted) + ", exact " + std::to_string(r.exact);
  return r;
}

inline CellReport cross_validate_cell(const GridCell &cell, const CrossValidateOptions &opts = {}) {
  return cross_validate_cell(BruteGroup(cell.spec, cell.n, opts.guard), cell, opts);
}

/// One report per cell, in grid order; consecutive cells over the same group
/// share its conjugacy classes.
inline std::vector<CellReport> cross_validate(const std::vector<GridCell> &grid, const CrossValidateOptions &opts = {}) {
  std::vector<CellReport> out;
  out.reserve(grid.size());
  std::unique_ptr<BruteGroup> group;
  for (const auto &cell : grid) {
    if (!group || group->spec() != cell.spec || group->n() != cell.n)
      group = std::make_unique<BruteGroup>(cell.spec, cell.n, opts.guard);
    out.push_back(cross_validate_cell(*group, cell, opts));
  }
  return out;
}

} // namespace vwidth
