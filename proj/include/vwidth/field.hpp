#pragma once

// Exact arithmetic in GF(p), GF(p^k) and Q.
//
// Finite field elements are stored as a code in [0, q): the coefficient vector
// (c0, ..., c_{k-1}) of the residue modulo the defining polynomial, read as the
// base-p number c0 + c1 p + ... + c_{k-1} p^{k-1}. Code order is the fixed
// enumeration order of the field (0 first). Multiplication goes through
// discrete log tables against the first primitive element in that order.

#include "vwidth/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace vwidth {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { Prime, PrimePower, Rationals };

/// Largest finite field order served by the table-based arithmetic.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 20;

namespace detail {

using Poly = std::vector<std::uint32_t>; // c0, c1, ..., low degree first

inline bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0)
        n /= d;
    }
  }
  if (n > 1)
    out.push_back(n);
  return out;
}

inline std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  // m > 1, gcd(a, m) = 1
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::tie(t, new_t) = std::make_tuple(new_t, t - quot * new_t);
    std::tie(r, new_r) = std::make_tuple(new_r, r - quot * new_r);
  }
  if (t < 0)
    t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

inline void trim(Poly &a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

/// Remainder of a modulo the monic polynomial m over GF(p).
inline Poly poly_mod(Poly a, const Poly &m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t sub = (lead * m[i]) % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

inline bool is_irreducible(const Poly &f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 1)
    return deg == 1;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i)
      count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(d + 1, 0);
      g[d] = 1;
      std::uint64_t rest = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      if (poly_mod(f, g, p).empty())
        return false;
    }
  }
  return true;
}

/// Smallest monic irreducible of degree k, comparing c0 first, then c1, ...
inline Poly default_modulus(std::uint32_t p, std::uint32_t k) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < k; ++i)
    count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(k + 1, 0);
    f[k] = 1;
    std::uint64_t rest = idx;
    for (std::uint32_t i = k; i-- > 0;) { // c_{k-1} varies fastest
      f[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    if (is_irreducible(f, p))
      return f;
  }
  throw InvariantViolation("no irreducible polynomial found");
}

struct FieldData {
  FieldKind kind = FieldKind::Rationals;
  std::uint32_t p = 0;
  std::uint32_t k = 1;
  std::uint32_t q = 0;
  Poly modulus;
  std::uint32_t primitive = 0;
  std::vector<std::uint32_t> exp_table; // g^e, e in [0, q-1)
  std::vector<std::uint32_t> log_table; // inverse of exp_table; entry 0 unused
  std::vector<std::uint32_t> neg_table;
  std::vector<std::uint32_t> add_table; // q*q, only for small q

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (!add_table.empty())
      return add_table[static_cast<std::size_t>(a) * q + b];
    if (k == 1)
      return (a + b) % p;
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      out += ((a % p + b % p) % p) * scale;
      a /= p;
      b /= p;
      scale *= p;
    }
    return out;
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0)
      return 0;
    const std::uint32_t e = (log_table[a] + log_table[b]) % (q - 1);
    return exp_table[e];
  }

  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    if (k == 1)
      return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p);
    Poly pa = decode(a), pb = decode(b), prod(2 * k, 0);
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = 0; j < k; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{pa[i]} * pb[j]) % p);
    return encode(poly_mod(prod, modulus, p));
  }

  Poly decode(std::uint32_t code) const {
    Poly out(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
      out[i] = code % p;
      code /= p;
    }
    return out;
  }

  std::uint32_t encode(const Poly &coeffs) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      const std::uint32_t c = i < coeffs.size() ? coeffs[i] : 0;
      out += c * scale;
      scale *= p;
    }
    return out;
  }

  void build_tables() {
    neg_table.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      Poly c = decode(a);
      for (auto &x : c)
        x = (p - x) % p;
      neg_table[a] = encode(c);
    }
    if (q <= 256) {
      add_table.resize(static_cast<std::size_t>(q) * q);
      for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b) {
          Poly ca = decode(a), cb = decode(b);
          for (std::uint32_t i = 0; i < k; ++i)
            ca[i] = (ca[i] + cb[i]) % p;
          add_table[static_cast<std::size_t>(a) * q + b] = encode(ca);
        }
    }
    const std::uint64_t order = q - 1;
    const auto factors = prime_factors(order);
    auto slow_pow = [&](std::uint32_t base, std::uint64_t e) {
      std::uint32_t result = 1;
      while (e > 0) {
        if (e & 1U)
          result = slow_mul(result, base);
        base = slow_mul(base, base);
        e >>= 1U;
      }
      return result;
    };
    primitive = 0;
    for (std::uint32_t cand = 1; cand < q; ++cand) {
      bool generates = true;
      for (auto l : factors)
        if (slow_pow(cand, order / l) == 1) {
          generates = false;
          break;
        }
      if (generates) {
        primitive = cand;
        break;
      }
    }
    ensure(primitive != 0, "finite field without primitive element");
    exp_table.resize(order);
    log_table.assign(q, 0);
    std::uint32_t cur = 1;
    for (std::uint64_t e = 0; e < order; ++e) {
      exp_table[e] = cur;
      log_table[cur] = static_cast<std::uint32_t>(e);
      cur = slow_mul(cur, primitive);
    }
    ensure(cur == 1, "primitive element order mismatch");
  }
};

inline const FieldData *intern_field(FieldData data) {
  using Key = std::tuple<int, std::uint32_t, std::uint32_t, Poly>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<const FieldData>> registry;
  Key key{static_cast<int>(data.kind), data.p, data.k, data.modulus};
  std::lock_guard lock(mutex);
  auto it = registry.find(key);
  if (it != registry.end())
    return it->second.get();
  if (data.kind != FieldKind::Rationals)
    data.build_tables();
  auto owned = std::make_unique<const FieldData>(std::move(data));
  const FieldData *raw = owned.get();
  registry.emplace(std::move(key), std::move(owned));
  return raw;
}

} // namespace detail

/// Handle to an immutable, interned field description. Cheap to copy;
/// two specs compare equal iff they describe the same field.
class FieldSpec {
public:
  FieldSpec() = default;
  explicit FieldSpec(const detail::FieldData *data) : data_(data) {}

  FieldKind kind() const { return data_->kind; }
  bool is_finite() const { return data_->kind != FieldKind::Rationals; }
  std::uint32_t characteristic() const { return data_->p; }
  std::uint32_t p() const { return data_->p; }
  std::uint32_t k() const { return data_->k; }
  std::uint32_t q() const { return data_->q; }
  const std::vector<std::uint32_t> &modulus() const { return data_->modulus; }
  const detail::FieldData &data() const { return *data_; }
  bool valid() const { return data_ != nullptr; }

  /// Short name: "gf5", "gf2_2" or "q".
  std::string name() const {
    if (!is_finite())
      return "q";
    if (k() == 1)
      return "gf" + std::to_string(p());
    return "gf" + std::to_string(p()) + "_" + std::to_string(k());
  }

  friend bool operator==(const FieldSpec &a, const FieldSpec &b) { return a.data_ == b.data_; }
  friend bool operator!=(const FieldSpec &a, const FieldSpec &b) { return a.data_ != b.data_; }

private:
  const detail::FieldData *data_ = nullptr;
};

/// Validates and interns a field. For prime-power fields without an explicit
/// modulus the smallest monic irreducible polynomial of degree k is used.
inline FieldSpec make_field(FieldKind kind, std::uint32_t p = 0, std::uint32_t k = 1,
                            std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
  detail::FieldData data;
  data.kind = kind;
  if (kind == FieldKind::Rationals)
    return FieldSpec(detail::intern_field(std::move(data)));
  if (!detail::is_prime(p))
    throw Error(ErrorCode::NonPrimeP, std::to_string(p) + " is not prime");
  if (kind == FieldKind::Prime)
    k = 1;
  if (k < 1)
    throw Error(ErrorCode::BadSize, "extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxFieldOrder)
      throw Error(ErrorCode::GuardExceeded, "field order exceeds table limit");
  }
  data.p = p;
  data.k = k;
  data.q = static_cast<std::uint32_t>(q);
  if (k == 1) {
    data.kind = FieldKind::Prime;
    data.modulus = {0, 1};
    if (kind == FieldKind::PrimePower && modulus) {
      if (modulus->size() != 2 || modulus->back() != 1 || (*modulus)[0] >= p)
        throw Error(ErrorCode::ReducibleModulus, "modulus must be monic of degree 1");
      // A degree-1 modulus x + c always gives GF(p) with the same coding.
    }
  } else {
    data.kind = FieldKind::PrimePower;
    if (modulus) {
      const auto &m = *modulus;
      if (m.size() != k + 1 || m.back() != 1)
        throw Error(ErrorCode::ReducibleModulus, "modulus must be monic of degree k");
      for (auto c : m)
        if (c >= p)
          throw Error(ErrorCode::ReducibleModulus, "modulus coefficient out of range");
      if (!detail::is_irreducible(m, p))
        throw Error(ErrorCode::ReducibleModulus, "modulus is reducible over GF(p)");
      data.modulus = m;
    } else {
      data.modulus = detail::default_modulus(p, k);
    }
  }
  return FieldSpec(detail::intern_field(std::move(data)));
}

inline FieldSpec rationals() { return make_field(FieldKind::Rationals); }
inline FieldSpec gf(std::uint32_t p, std::uint32_t k = 1) {
  return make_field(k == 1 ? FieldKind::Prime : FieldKind::PrimePower, p, k);
}

/// Exact field element; immutable value type.
class FieldElem {
public:
  FieldElem() = default;

  static FieldElem from_code(const FieldSpec &spec, std::uint32_t code) {
    ensure(spec.is_finite() && code < spec.q(), "finite code out of range");
    return FieldElem(spec, code);
  }

  static FieldElem from_rational(const FieldSpec &spec, Rational value) {
    ensure(!spec.is_finite(), "rational value for finite field");
    return FieldElem(spec, std::move(value));
  }

  /// Image of an integer under Z -> K.
  static FieldElem from_int(const FieldSpec &spec, long long value) {
    if (!spec.is_finite())
      return FieldElem(spec, Rational(value));
    const long long p = spec.p();
    long long r = value % p;
    if (r < 0)
      r += p;
    return FieldElem(spec, static_cast<std::uint32_t>(r)); // prime subfield: code = residue
  }

  static FieldElem zero(const FieldSpec &spec) { return from_int(spec, 0); }
  static FieldElem one(const FieldSpec &spec) { return from_int(spec, 1); }

  const FieldSpec &spec() const { return spec_; }
  std::uint32_t code() const { return std::get<std::uint32_t>(value_); }
  const Rational &rational() const { return std::get<Rational>(value_); }

  bool is_zero() const {
    if (auto c = std::get_if<std::uint32_t>(&value_))
      return *c == 0;
    return std::get<Rational>(value_) == 0;
  }
  bool is_one() const {
    if (auto c = std::get_if<std::uint32_t>(&value_))
      return *c == 1;
    return std::get<Rational>(value_) == 1;
  }

  friend bool operator==(const FieldElem &a, const FieldElem &b) {
    return a.spec_ == b.spec_ && a.value_ == b.value_;
  }
  friend bool operator!=(const FieldElem &a, const FieldElem &b) { return !(a == b); }
  /// Enumeration order for finite fields, numeric order for Q.
  friend bool operator<(const FieldElem &a, const FieldElem &b) {
    check_same(a, b);
    return a.value_ < b.value_;
  }

  friend FieldElem operator+(const FieldElem &a, const FieldElem &b) {
    check_same(a, b);
    if (a.spec_.is_finite())
      return FieldElem(a.spec_, a.spec_.data().add(a.code(), b.code()));
    return FieldElem(a.spec_, Rational(a.rational() + b.rational()));
  }
  friend FieldElem operator-(const FieldElem &a) {
    if (a.spec_.is_finite())
      return FieldElem(a.spec_, a.spec_.data().neg_table[a.code()]);
    return FieldElem(a.spec_, Rational(-a.rational()));
  }
  friend FieldElem operator-(const FieldElem &a, const FieldElem &b) { return a + (-b); }
  friend FieldElem operator*(const FieldElem &a, const FieldElem &b) {
    check_same(a, b);
    if (a.spec_.is_finite())
      return FieldElem(a.spec_, a.spec_.data().mul(a.code(), b.code()));
    return FieldElem(a.spec_, Rational(a.rational() * b.rational()));
  }
  friend FieldElem operator/(const FieldElem &a, const FieldElem &b) { return a * b.inv(); }

  FieldElem &operator+=(const FieldElem &o) { return *this = *this + o; }
  FieldElem &operator-=(const FieldElem &o) { return *this = *this - o; }
  FieldElem &operator*=(const FieldElem &o) { return *this = *this * o; }

  FieldElem inv() const {
    if (is_zero())
      throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    if (spec_.is_finite()) {
      const auto &d = spec_.data();
      const std::uint32_t l = d.log_table[code()];
      return FieldElem(spec_, d.exp_table[(d.q - 1 - l) % (d.q - 1)]);
    }
    return FieldElem(spec_, Rational(1 / rational()));
  }

  /// Any integer exponent for nonzero bases, nonnegative for zero.
  FieldElem pow(long long e) const {
    if (is_zero()) {
      if (e < 0)
        throw Error(ErrorCode::DivisionByZero, "negative power of zero");
      return e == 0 ? one(spec_) : *this;
    }
    if (spec_.is_finite()) {
      const auto &d = spec_.data();
      const long long order = d.q - 1;
      long long r = e % order;
      if (r < 0)
        r += order;
      const std::uint64_t l = (std::uint64_t{d.log_table[code()]} * static_cast<std::uint64_t>(r)) % order;
      return FieldElem(spec_, d.exp_table[l]);
    }
    const unsigned long long mag = e < 0 ? 0ULL - static_cast<unsigned long long>(e) : static_cast<unsigned long long>(e);
    FieldElem base = e < 0 ? inv() : *this;
    FieldElem result = one(spec_);
    unsigned long long m = mag;
    while (m > 0) {
      if (m & 1ULL)
        result *= base;
      m >>= 1U;
      if (m > 0)
        base *= base;
    }
    return result;
  }

  /// Textual form: residue, "c0,...,c(k-1)", or "num/den" / "num".
  std::string to_string() const {
    if (!spec_.is_finite()) {
      const Rational &r = rational();
      const BigInt num = boost::multiprecision::numerator(r);
      const BigInt den = boost::multiprecision::denominator(r);
      if (den == 1)
        return num.str();
      return num.str() + "/" + den.str();
    }
    if (spec_.k() == 1)
      return std::to_string(code());
    const auto coeffs = spec_.data().decode(code());
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i)
        out += ',';
      out += std::to_string(coeffs[i]);
    }
    return out;
  }

private:
  FieldElem(const FieldSpec &spec, std::uint32_t code) : spec_(spec), value_(code) {}
  FieldElem(const FieldSpec &spec, Rational value) : spec_(spec), value_(std::move(value)) {}

  static void check_same(const FieldElem &a, const FieldElem &b) {
    if (a.spec_ != b.spec_)
      throw Error(ErrorCode::SpecMismatch, "operands from different fields");
  }

  FieldSpec spec_;
  std::variant<std::uint32_t, Rational> value_{std::uint32_t{0}};
};

namespace detail {

inline std::optional<long long> parse_int(std::string_view text) {
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);
  if (text.empty())
    return std::nullopt;
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size())
    return std::nullopt;
  long long v = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      return std::nullopt;
    if (v > (std::numeric_limits<long long>::max() - 9) / 10)
      return std::nullopt;
    v = v * 10 + (text[i] - '0');
  }
  return neg ? -v : v;
}

inline std::optional<BigInt> parse_bigint(std::string_view text) {
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);
  if (text.empty())
    return std::nullopt;
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size())
    return std::nullopt;
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      return std::nullopt;
  return BigInt(std::string(text));
}

} // namespace detail

/// Parses the textual element format of `spec`.
inline FieldElem parse_elem(const FieldSpec &spec, std::string_view text) {
  if (!spec.is_finite()) {
    const auto slash = text.find('/');
    auto num = detail::parse_bigint(text.substr(0, slash));
    if (!num)
      throw Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "'");
    BigInt den = 1;
    if (slash != std::string_view::npos) {
      auto d = detail::parse_bigint(text.substr(slash + 1));
      if (!d || *d == 0)
        throw Error(ErrorCode::ParseError, "bad denominator in '" + std::string(text) + "'");
      den = *d;
    }
    if (den < 0) {
      num = -*num;
      den = -den;
    }
    return FieldElem::from_rational(spec, Rational(*num, den));
  }
  std::vector<std::uint32_t> coeffs;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    auto v = detail::parse_int(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!v)
      throw Error(ErrorCode::ParseError, "bad field element '" + std::string(text) + "'");
    const long long p = spec.p();
    long long r = *v % p;
    if (r < 0)
      r += p;
    coeffs.push_back(static_cast<std::uint32_t>(r));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  if (coeffs.size() > spec.k())
    throw Error(ErrorCode::ParseError, "too many coefficients in '" + std::string(text) + "'");
  if (spec.k() == 1)
    return FieldElem::from_code(spec, coeffs[0]);
  return FieldElem::from_code(spec, spec.data().encode(coeffs));
}

inline FieldElem primitive_element(const FieldSpec &spec) {
  if (!spec.is_finite())
    throw Error(ErrorCode::NotFinite, "primitive element of Q");
  return FieldElem::from_code(spec, spec.data().primitive);
}

/// Exponent e in [0, q-1) with g^e = x for the stored primitive element g.
inline std::uint32_t discrete_log(const FieldSpec &spec, const FieldElem &x) {
  if (!spec.is_finite())
    throw Error(ErrorCode::NotFinite, "discrete log over Q");
  if (x.spec() != spec)
    throw Error(ErrorCode::SpecMismatch, "element from another field");
  if (x.is_zero())
    throw Error(ErrorCode::ZeroElement, "discrete log of zero");
  return spec.data().log_table[x.code()];
}

inline std::vector<FieldElem> enumerate_field(const FieldSpec &spec) {
  if (!spec.is_finite())
    throw Error(ErrorCode::NotFinite, "cannot enumerate Q");
  std::vector<FieldElem> out;
  out.reserve(spec.q());
  for (std::uint32_t c = 0; c < spec.q(); ++c)
    out.push_back(FieldElem::from_code(spec, c));
  return out;
}

namespace detail {

/// Exact s-th root of n >= 0 when it exists.
inline std::optional<BigInt> exact_integer_root(const BigInt &n, std::uint64_t s) {
  if (n < 2 || s == 1)
    return n;
  const std::uint64_t bits = boost::multiprecision::msb(n) + 1;
  if (s >= bits)
    return std::nullopt; // 1 < root^s would need root >= 2, i.e. s < bits
  BigInt lo = 1, hi = BigInt(1) << static_cast<unsigned>(bits / s + 1);
  const auto exp = static_cast<unsigned>(s);
  while (lo <= hi) {
    BigInt mid = (lo + hi) >> 1;
    BigInt pw = boost::multiprecision::pow(mid, exp);
    if (pw == n)
      return mid;
    if (pw < n)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return std::nullopt;
}

inline std::optional<Rational> rational_real_root(const Rational &x, std::uint64_t s) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (num < 0 && s % 2 == 0)
    return std::nullopt;
  auto rn = exact_integer_root(num < 0 ? BigInt(-num) : num, s);
  if (!rn)
    return std::nullopt;
  auto rd = exact_integer_root(den, s);
  if (!rd)
    return std::nullopt;
  Rational root(*rn, *rd);
  return num < 0 ? Rational(-root) : root;
}

struct RootSolution {
  std::uint64_t first;  // smallest exponent e with e*s = L (mod q-1)
  std::uint64_t step;   // (q-1)/gcd
  std::uint64_t count;  // gcd(s, q-1)
};

inline std::optional<RootSolution> finite_root_exponents(const FieldElem &x, std::uint64_t s) {
  const FieldSpec &spec = x.spec();
  const std::uint64_t order = spec.q() - 1;
  const std::uint64_t log = discrete_log(spec, x);
  const std::uint64_t sr = s % order;
  const std::uint64_t g = std::gcd(sr, order); // gcd(0, m) = m
  if (log % g != 0)
    return std::nullopt;
  const std::uint64_t m = order / g;
  std::uint64_t e0 = 0;
  if (m > 1)
    e0 = ((log / g) % m) * mod_inverse((sr / g) % m, m) % m;
  return RootSolution{e0, m, g};
}

} // namespace detail

/// Every y with y^s = x (x nonzero), in enumeration / numeric order.
inline std::vector<FieldElem> all_sth_roots(const FieldElem &x, std::uint64_t s) {
  if (s == 0)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  if (x.is_zero())
    throw Error(ErrorCode::ZeroElement, "roots of zero are not taken");
  const FieldSpec &spec = x.spec();
  std::vector<FieldElem> out;
  if (!spec.is_finite()) {
    auto root = detail::rational_real_root(x.rational(), s);
    if (!root)
      return out;
    out.push_back(FieldElem::from_rational(spec, *root));
    if (s % 2 == 0)
      out.push_back(FieldElem::from_rational(spec, Rational(-*root)));
    std::sort(out.begin(), out.end());
    return out;
  }
  auto sol = detail::finite_root_exponents(x, s);
  if (!sol)
    return out;
  const auto &d = spec.data();
  for (std::uint64_t j = 0; j < sol->count; ++j)
    out.push_back(FieldElem::from_code(spec, d.exp_table[sol->first + j * sol->step]));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_sth_power(const FieldElem &x, std::uint64_t s) {
  if (x.is_zero())
    return true;
  if (!x.spec().is_finite())
    return detail::rational_real_root(x.rational(), s).has_value();
  return detail::finite_root_exponents(x, s).has_value();
}

/// Deterministic root: g^e with the smallest e solving e*s = log x (mod q-1);
/// over Q the positive root for even s and the real root for odd s.
inline FieldElem canonical_sth_root(const FieldElem &x, std::uint64_t s) {
  if (s == 0)
    throw Error(ErrorCode::BadSize, "exponent must be positive");
  if (x.is_zero())
    throw Error(ErrorCode::NotAnSthPower, "zero has no canonical root");
  const FieldSpec &spec = x.spec();
  if (!spec.is_finite()) {
    auto root = detail::rational_real_root(x.rational(), s);
    if (!root)
      throw Error(ErrorCode::NotAnSthPower, x.to_string() + " is not a " + std::to_string(s) + "-th power");
    return FieldElem::from_rational(spec, *root);
  }
  auto sol = detail::finite_root_exponents(x, s);
  if (!sol)
    throw Error(ErrorCode::NotAnSthPower, x.to_string() + " is not a " + std::to_string(s) + "-th power");
  return FieldElem::from_code(spec, spec.data().exp_table[sol->first]);
}

} // namespace vwidth
