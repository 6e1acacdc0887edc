#pragma once

// Upper-triangular matrix algebra over a FieldSpec. Indices are 0-based in
// the C++ API except where noted (matrix_unit follows the e_{i,j} notation).

#include "vwidth/error.hpp"
#include "vwidth/field.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

namespace vwidth {

/// Upper-triangular n x n array; the diagonal may contain zeros.
class TriArray {
public:
  TriArray() = default;
  TriArray(const FieldSpec &spec, std::size_t n)
      : spec_(spec), n_(n), entries_(n * n, FieldElem::zero(spec)) {}

  static TriArray identity(const FieldSpec &spec, std::size_t n) {
    TriArray out(spec, n);
    for (std::size_t i = 0; i < n; ++i)
      out.set(i, i, FieldElem::one(spec));
    return out;
  }

  const FieldSpec &spec() const { return spec_; }
  std::size_t n() const { return n_; }
  const FieldElem &at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, FieldElem value) { entries_[i * n_ + j] = std::move(value); }

  friend bool operator==(const TriArray &a, const TriArray &b) {
    return a.spec_ == b.spec_ && a.n_ == b.n_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const TriArray &a, const TriArray &b) { return !(a == b); }

  friend TriArray operator+(const TriArray &a, const TriArray &b) {
    check_compatible(a, b);
    TriArray out(a.spec_, a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = i; j < a.n_; ++j)
        out.set(i, j, a.at(i, j) + b.at(i, j));
    return out;
  }
  friend TriArray operator-(const TriArray &a, const TriArray &b) {
    check_compatible(a, b);
    TriArray out(a.spec_, a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = i; j < a.n_; ++j)
        out.set(i, j, a.at(i, j) - b.at(i, j));
    return out;
  }
  friend TriArray operator*(const TriArray &a, const TriArray &b) {
    check_compatible(a, b);
    const std::size_t n = a.n_;
    TriArray out(a.spec_, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        FieldElem acc = FieldElem::zero(a.spec_);
        for (std::size_t k = i; k <= j; ++k)
          if (!a.at(i, k).is_zero() && !b.at(k, j).is_zero())
            acc += a.at(i, k) * b.at(k, j);
        out.set(i, j, std::move(acc));
      }
    return out;
  }
  friend TriArray operator*(const FieldElem &c, const TriArray &a) {
    TriArray out(a.spec_, a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = i; j < a.n_; ++j)
        out.set(i, j, c * a.at(i, j));
    return out;
  }

  /// Leading m x m block.
  TriArray block(std::size_t m) const {
    TriArray out(spec_, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j)
        out.set(i, j, at(i, j));
    return out;
  }

  bool strictly_upper() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!at(i, i).is_zero())
        return false;
    return true;
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < n_; ++i) {
      out += i ? ",[" : "[";
      for (std::size_t j = 0; j < n_; ++j) {
        if (j)
          out += ',';
        out += j < i ? std::string("0") : at(i, j).to_string();
      }
      out += ']';
    }
    return out + "]";
  }

  friend bool operator<(const TriArray &a, const TriArray &b) {
    if (a.n_ != b.n_)
      return a.n_ < b.n_;
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = i; j < a.n_; ++j)
        if (a.at(i, j) != b.at(i, j))
          return a.at(i, j) < b.at(i, j);
    return false;
  }

private:
  static void check_compatible(const TriArray &a, const TriArray &b) {
    if (a.spec_ != b.spec_)
      throw Error(ErrorCode::SpecMismatch, "matrices over different fields");
    if (a.n_ != b.n_)
      throw Error(ErrorCode::SizeMismatch, "matrices of different sizes");
  }

  FieldSpec spec_;
  std::size_t n_ = 0;
  std::vector<FieldElem> entries_;
};

/// Invertible upper-triangular matrix: an element of T_n(K).
class TriMat {
public:
  TriMat() = default;

  static TriMat identity(const FieldSpec &spec, std::size_t n) {
    return TriMat(TriArray::identity(spec, n));
  }

  /// Validates `array` (zero diagonal entries are rejected).
  static TriMat from_array(TriArray array) {
    for (std::size_t i = 0; i < array.n(); ++i)
      if (array.at(i, i).is_zero())
        throw Error(ErrorCode::SingularDiagonal, "zero diagonal entry at " + std::to_string(i + 1));
    return TriMat(std::move(array));
  }

  const FieldSpec &spec() const { return a_.spec(); }
  std::size_t n() const { return a_.n(); }
  const FieldElem &at(std::size_t i, std::size_t j) const { return a_.at(i, j); }
  const TriArray &array() const { return a_; }

  bool is_identity() const { return a_ == TriArray::identity(spec(), n()); }

  friend bool operator==(const TriMat &a, const TriMat &b) { return a.a_ == b.a_; }
  friend bool operator!=(const TriMat &a, const TriMat &b) { return !(a == b); }
  friend bool operator<(const TriMat &a, const TriMat &b) { return a.a_ < b.a_; }

  friend TriMat operator*(const TriMat &a, const TriMat &b) { return TriMat(a.a_ * b.a_); }

  TriMat inverse() const {
    const std::size_t n = a_.n();
    TriArray x(spec(), n);
    for (std::size_t i = n; i-- > 0;) {
      const FieldElem d = a_.at(i, i).inv();
      x.set(i, i, d);
      for (std::size_t j = i + 1; j < n; ++j) {
        FieldElem acc = FieldElem::zero(spec());
        for (std::size_t k = i + 1; k <= j; ++k)
          if (!a_.at(i, k).is_zero())
            acc += a_.at(i, k) * x.at(k, j);
        x.set(i, j, -(acc * d));
      }
    }
    return TriMat(std::move(x));
  }

  /// Binary exponentiation; negative exponents go through the inverse.
  TriMat pow(long long e) const {
    TriMat base = e < 0 ? inverse() : *this;
    unsigned long long m = e < 0 ? 0ULL - static_cast<unsigned long long>(e) : static_cast<unsigned long long>(e);
    TriMat result = identity(spec(), n());
    while (m > 0) {
      if (m & 1ULL)
        result = result * base;
      m >>= 1U;
      if (m > 0)
        base = base * base;
    }
    return result;
  }

  std::string to_string() const { return a_.to_string(); }

  /// Leading m x m block, 1 <= m <= n.
  TriMat principal_block(std::size_t m) const {
    if (m < 1 || m > n())
      throw Error(ErrorCode::BadSize, "block size out of range");
    return TriMat(a_.block(m));
  }

  /// The block matrix (this, column; 0, gamma) of size n + 1.
  TriMat append_block(const std::vector<FieldElem> &column, const FieldElem &gamma) const {
    if (column.size() != n())
      throw Error(ErrorCode::BadSize, "column height must equal n");
    if (gamma.spec() != spec())
      throw Error(ErrorCode::SpecMismatch, "corner entry from another field");
    if (gamma.is_zero())
      throw Error(ErrorCode::SingularDiagonal, "zero corner entry");
    TriArray out(spec(), n() + 1);
    for (std::size_t i = 0; i < n(); ++i) {
      for (std::size_t j = i; j < n(); ++j)
        out.set(i, j, at(i, j));
      if (column[i].spec() != spec())
        throw Error(ErrorCode::SpecMismatch, "column entry from another field");
      out.set(i, n(), column[i]);
    }
    out.set(n(), n(), gamma);
    return TriMat(std::move(out));
  }

private:
  explicit TriMat(TriArray a) : a_(std::move(a)) {}
  TriArray a_;
};

/// [a, b] = a^-1 b^-1 a b, so that ab = ba [a, b].
inline TriMat commutator(const TriMat &a, const TriMat &b) {
  return a.inverse() * b.inverse() * a * b;
}

inline TriMat mat_make(const FieldSpec &spec, std::size_t n, const std::vector<std::vector<FieldElem>> &entries) {
  if (n < 1)
    throw Error(ErrorCode::BadSize, "matrix size must be positive");
  if (entries.size() != n)
    throw Error(ErrorCode::BadSize, "expected " + std::to_string(n) + " rows");
  TriArray a(spec, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (entries[i].size() != n)
      throw Error(ErrorCode::BadSize, "row " + std::to_string(i + 1) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      const FieldElem &v = entries[i][j];
      if (v.spec() != spec)
        throw Error(ErrorCode::SpecMismatch, "entry from another field");
      if (j < i) {
        if (!v.is_zero())
          throw Error(ErrorCode::NotTriangular, "nonzero entry below the diagonal");
        continue;
      }
      a.set(i, j, v);
    }
  }
  return TriMat::from_array(std::move(a));
}

/// Convenience constructor from textual entries, e.g. {{"1","1"},{"0","2"}}.
inline TriMat mat_from_strings(const FieldSpec &spec, const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::vector<FieldElem>> entries;
  for (const auto &row : rows) {
    std::vector<FieldElem> r;
    for (const auto &cell : row)
      r.push_back(parse_elem(spec, cell));
    entries.push_back(std::move(r));
  }
  return mat_make(spec, rows.size(), entries);
}

inline TriMat mat_from_ints(const FieldSpec &spec, std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<std::vector<FieldElem>> entries;
  for (const auto &row : rows) {
    std::vector<FieldElem> r;
    for (auto v : row)
      r.push_back(FieldElem::from_int(spec, v));
    entries.push_back(std::move(r));
  }
  return mat_make(spec, rows.size(), entries);
}

/// Matrix unit e_{i,j} of size n with 1-based indices, i < j <= n.
inline TriArray matrix_unit(const FieldSpec &spec, std::size_t n, std::size_t i, std::size_t j) {
  if (i < 1 || i >= j || j > n)
    throw Error(ErrorCode::BadIndex, "matrix unit needs 1 <= i < j <= n");
  TriArray out(spec, n);
  out.set(i - 1, j - 1, FieldElem::one(spec));
  return out;
}

/// Membership in UT_n^r: unit diagonal and r-1 zero superdiagonals.
inline bool is_level(const TriMat &a, std::size_t r) {
  const std::size_t n = a.n();
  for (std::size_t i = 0; i < n; ++i) {
    if (!a.at(i, i).is_one())
      return false;
    for (std::size_t j = i + 1; j < n && j < i + r; ++j)
      if (!a.at(i, j).is_zero())
        return false;
  }
  return true;
}

/// Element of FT(K): identity outside a leading corner block.
class FinitaryMat {
public:
  FinitaryMat() = default;

  std::size_t corner_size() const { return corner_.n(); }
  const TriMat &corner() const { return corner_; }
  const FieldSpec &spec() const { return corner_.spec(); }

  friend bool operator==(const FinitaryMat &a, const FinitaryMat &b) { return a.corner_ == b.corner_; }
  friend bool operator!=(const FinitaryMat &a, const FinitaryMat &b) { return !(a == b); }

  friend FinitaryMat fin_make(const TriMat &corner);

private:
  explicit FinitaryMat(TriMat corner) : corner_(std::move(corner)) {}
  TriMat corner_;
};

/// Smallest m such that `a` agrees with the identity outside its leading m x m block.
inline std::size_t minimal_corner(const TriMat &a) {
  std::size_t m = 1;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = i; j < a.n(); ++j) {
      const bool identity_entry = i == j ? a.at(i, j).is_one() : a.at(i, j).is_zero();
      if (!identity_entry)
        m = std::max(m, j + 1);
    }
  return m;
}

inline FinitaryMat fin_make(const TriMat &corner) {
  return FinitaryMat(corner.principal_block(minimal_corner(corner)));
}

/// The leading size x size block of f, size >= f's minimal corner.
inline TriMat fin_embed(const FinitaryMat &f, std::size_t size) {
  const std::size_t m = f.corner_size();
  if (size < m)
    throw Error(ErrorCode::BadSize, "embedding smaller than the corner");
  if (size == m)
    return f.corner();
  std::vector<FieldElem> zeros(m, FieldElem::zero(f.spec()));
  TriMat out = f.corner();
  for (std::size_t k = m; k < size; ++k) {
    zeros.resize(k, FieldElem::zero(f.spec()));
    out = out.append_block(zeros, FieldElem::one(f.spec()));
  }
  return out;
}

inline FinitaryMat fin_mul(const FinitaryMat &a, const FinitaryMat &b) {
  const std::size_t m = std::max(a.corner_size(), b.corner_size());
  return fin_make(fin_embed(a, m) * fin_embed(b, m));
}

inline FinitaryMat fin_inv(const FinitaryMat &a) { return fin_make(a.corner().inverse()); }

inline FinitaryMat fin_pow(const FinitaryMat &a, long long e) { return fin_make(a.corner().pow(e)); }

inline FinitaryMat fin_identity(const FieldSpec &spec) { return fin_make(TriMat::identity(spec, 1)); }

enum class GroupKind { Full, Unitriangular, Level };

/// Default cap on enumerated group elements.
inline constexpr std::uint64_t kDefaultEnumerationGuard = 1'000'000;

/// Exhaustive, deterministic enumeration of T_n(K), UT_n(K) or UT_n^r(K).
/// Order: lexicographic in (diagonal entries, upper entries row-major) with
/// each coordinate running through the field enumeration order (K* for the
/// diagonal) and the last coordinate varying fastest.
class GroupEnumerator {
public:
  GroupEnumerator(const FieldSpec &spec, std::size_t n, GroupKind kind, std::size_t level = 1,
                  std::uint64_t guard = kDefaultEnumerationGuard)
      : spec_(spec), n_(n) {
    if (!spec.is_finite())
      throw Error(ErrorCode::NotFinite, "cannot enumerate a group over Q");
    if (n < 1)
      throw Error(ErrorCode::BadSize, "matrix size must be positive");
    if (kind == GroupKind::Unitriangular)
      level = 1;
    if (kind == GroupKind::Level && level < 1)
      throw Error(ErrorCode::BadSize, "level must be at least 1");
    const std::uint32_t q = spec.q();
    long double count = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (kind == GroupKind::Full) {
        coords_.push_back({i, i, q - 1, 1});
        count *= q - 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool free = kind == GroupKind::Full || j - i >= level;
        if (free) {
          coords_.push_back({i, j, q, 0});
          count *= q;
        }
      }
    if (count > static_cast<long double>(guard))
      throw Error(ErrorCode::GuardExceeded,
                  "group order exceeds enumeration guard " + std::to_string(guard));
    size_ = static_cast<std::uint64_t>(count + 0.5L);
  }

  std::uint64_t size() const { return size_; }

  /// Element with the given position in the enumeration order.
  TriMat at(std::uint64_t index) const {
    TriArray a = TriArray::identity(spec_, n_);
    for (std::size_t c = coords_.size(); c-- > 0;) {
      const auto &coord = coords_[c];
      const std::uint64_t digit = index % coord.radix;
      index /= coord.radix;
      a.set(coord.i, coord.j, FieldElem::from_code(spec_, static_cast<std::uint32_t>(digit + coord.offset)));
    }
    return TriMat::from_array(std::move(a));
  }

  class iterator {
  public:
    using iterator_category = std::input_iterator_tag;
    using value_type = TriMat;
    using difference_type = std::ptrdiff_t;
    using pointer = const TriMat *;
    using reference = TriMat;

    iterator() = default;
    iterator(const GroupEnumerator *owner, std::uint64_t pos) : owner_(owner), pos_(pos) {}
    TriMat operator*() const { return owner_->at(pos_); }
    iterator &operator++() {
      ++pos_;
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++pos_;
      return old;
    }
    friend bool operator==(const iterator &a, const iterator &b) { return a.pos_ == b.pos_; }
    friend bool operator!=(const iterator &a, const iterator &b) { return a.pos_ != b.pos_; }

  private:
    const GroupEnumerator *owner_ = nullptr;
    std::uint64_t pos_ = 0;
  };

  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, size_); }

private:
  struct Coord {
    std::size_t i, j;
    std::uint64_t radix;
    std::uint32_t offset; // diagonal digits skip the zero element
  };

  FieldSpec spec_;
  std::size_t n_;
  std::vector<Coord> coords_;
  std::uint64_t size_ = 0;
};

inline GroupEnumerator enumerate_group(const FieldSpec &spec, std::size_t n, GroupKind kind,
                                       std::size_t level = 1,
                                       std::uint64_t guard = kDefaultEnumerationGuard) {
  return GroupEnumerator(spec, n, kind, level, guard);
}

} // namespace vwidth
