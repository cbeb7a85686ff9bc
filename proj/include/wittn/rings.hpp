#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"
#include "wittn/polynomial.hpp"

namespace wittn {

enum class RingKind { Integers, Rationals, IntegersMod, FiniteField, Polynomial };

/// Value description of a coefficient ring; `make_ring` turns it into a ring object.
struct RingDescriptor {
  RingKind kind = RingKind::Integers;
  Integer m = 0;                        // IntegersMod
  std::uint64_t p = 0;                  // FiniteField
  std::uint64_t f = 0;                  // FiniteField
  std::vector<std::uint64_t> modulus;   // FiniteField, low degree first, monic of degree f
  RingKind base = RingKind::Integers;   // Polynomial: Integers or Rationals
  std::vector<std::string> variables;   // Polynomial

  static RingDescriptor integers() { return {}; }
  static RingDescriptor rationals() {
    RingDescriptor d;
    d.kind = RingKind::Rationals;
    return d;
  }
  static RingDescriptor integers_mod(Integer m) {
    RingDescriptor d;
    d.kind = RingKind::IntegersMod;
    d.m = std::move(m);
    return d;
  }
  /// An empty modulus selects the default (lexicographically least irreducible).
  static RingDescriptor finite_field(std::uint64_t p, std::uint64_t f, std::vector<std::uint64_t> modulus = {}) {
    RingDescriptor d;
    d.kind = RingKind::FiniteField;
    d.p = p;
    d.f = f;
    d.modulus = std::move(modulus);
    return d;
  }
  static RingDescriptor polynomial(RingKind base, std::vector<std::string> variables) {
    RingDescriptor d;
    d.kind = RingKind::Polynomial;
    d.base = base;
    d.variables = std::move(variables);
    return d;
  }

  friend bool operator==(const RingDescriptor&, const RingDescriptor&) = default;
};

/// The operations every coefficient ring provides.
template <class R>
concept CommutativeRing = requires(const R& r, const typename R::element_type& a, const Integer& n) {
  { r.zero() } -> std::same_as<typename R::element_type>;
  { r.one() } -> std::same_as<typename R::element_type>;
  { r.from_integer(n) } -> std::same_as<typename R::element_type>;
  { r.add(a, a) } -> std::same_as<typename R::element_type>;
  { r.sub(a, a) } -> std::same_as<typename R::element_type>;
  { r.mul(a, a) } -> std::same_as<typename R::element_type>;
  { r.neg(a) } -> std::same_as<typename R::element_type>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { a == a } -> std::convertible_to<bool>;
  { r.format(a) } -> std::convertible_to<std::string>;
  { r.descriptor() } -> std::same_as<RingDescriptor>;
};

/// Torsion-free rings in which division by a nonzero integer can be attempted.
template <class R>
concept ExactDivisionRing = CommutativeRing<R> && requires(const R& r, const typename R::element_type& a, const Integer& n) {
  { r.div_exact(a, n) } -> std::same_as<typename R::element_type>;
};

/// Rings that can report whether they are Z_(p)-algebras and invert integers prime to p.
template <class R>
concept LocalizableRing = CommutativeRing<R> && requires(const R& r, const Integer& n, std::uint64_t p) {
  { r.is_local_at(p) } -> std::convertible_to<bool>;
  { r.unit_inverse(n) } -> std::same_as<typename R::element_type>;
};

template <CommutativeRing R>
typename R::element_type ring_pow(const R& ring, typename R::element_type base, std::uint64_t e) {
  auto result = ring.one();
  while (e > 0) {
    if (e & 1) result = ring.mul(result, base);
    e >>= 1;
    if (e > 0) base = ring.mul(base, base);
  }
  return result;
}

/// n-fold sum of a ring element, n >= 0.
template <CommutativeRing R>
typename R::element_type ring_scale(const R& ring, const typename R::element_type& a, const Integer& n) {
  return ring.mul(ring.from_integer(n), a);
}

// ---------------------------------------------------------------------------

class Integers {
 public:
  using element_type = Integer;

  element_type zero() const { return 0; }
  element_type one() const { return 1; }
  element_type from_integer(const Integer& n) const { return n; }
  element_type add(const element_type& a, const element_type& b) const { return a + b; }
  element_type sub(const element_type& a, const element_type& b) const { return a - b; }
  element_type mul(const element_type& a, const element_type& b) const { return a * b; }
  element_type neg(const element_type& a) const { return -a; }
  bool is_zero(const element_type& a) const { return a == 0; }

  element_type div_exact(const element_type& a, const Integer& n) const {
    if (n == 0) throw DomainError("division by zero");
    if (!mpz_divisible_p(a.get_mpz_t(), n.get_mpz_t())) throw NonIntegralDivision(a.get_str(), n.get_str());
    Integer q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return q;
  }

  std::string format(const element_type& a) const { return a.get_str(); }
  element_type parse(const std::string& s) const { return parse_integer(s); }
  RingDescriptor descriptor() const { return RingDescriptor::integers(); }
};

class Rationals {
 public:
  using element_type = Rational;

  element_type zero() const { return 0; }
  element_type one() const { return 1; }
  element_type from_integer(const Integer& n) const { return Rational(n); }
  element_type add(const element_type& a, const element_type& b) const { return a + b; }
  element_type sub(const element_type& a, const element_type& b) const { return a - b; }
  element_type mul(const element_type& a, const element_type& b) const { return a * b; }
  element_type neg(const element_type& a) const { return -a; }
  bool is_zero(const element_type& a) const { return a == 0; }

  element_type div_exact(const element_type& a, const Integer& n) const {
    if (n == 0) throw DomainError("division by zero");
    return a / Rational(n);
  }

  bool is_local_at(std::uint64_t) const { return true; }
  element_type unit_inverse(const Integer& n) const {
    if (n == 0) throw DomainError("0 is not a unit");
    return Rational(1) / Rational(n);
  }

  std::string format(const element_type& a) const { return a.get_str(); }
  element_type parse(const std::string& s) const {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw DomainError("not a rational: '" + s + "'");
    q.canonicalize();
    return q;
  }
  RingDescriptor descriptor() const { return RingDescriptor::rationals(); }
};

/// Z/m with residues in [0, m).
class IntegersMod {
 public:
  using element_type = std::uint64_t;

  explicit IntegersMod(const Integer& m) {
    if (m < 2) throw ConstructionError("integers_mod: modulus must be >= 2");
    if (!m.fits_ulong_p() || m > (Integer(1) << 62))
      throw ConstructionError("integers_mod: modulus must be < 2^62");
    m_ = m.get_ui();
  }

  std::uint64_t modulus() const noexcept { return m_; }

  element_type zero() const { return 0; }
  element_type one() const { return 1 % m_; }
  element_type from_integer(const Integer& n) const { return mpz_fdiv_ui(n.get_mpz_t(), m_); }
  element_type add(element_type a, element_type b) const {
    auto s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  element_type sub(element_type a, element_type b) const { return a >= b ? a - b : a + m_ - b; }
  element_type mul(element_type a, element_type b) const {
    return static_cast<element_type>(static_cast<unsigned __int128>(a) * b % m_);
  }
  element_type neg(element_type a) const { return a == 0 ? 0 : m_ - a; }
  bool is_zero(element_type a) const { return a == 0; }

  /// True iff m is a power of p, i.e. Z/m is a Z_(p)-algebra.
  bool is_local_at(std::uint64_t p) const { return p >= 2 && prime_power_exponent(Integer(m_), p) >= 1; }

  element_type unit_inverse(const Integer& n) const {
    Integer inv, mod(m_);
    Integer r = n % mod;
    if (r < 0) r += mod;
    if (mpz_invert(inv.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw DomainError(n.get_str() + " is not a unit modulo " + mod.get_str());
    return inv.get_ui();
  }

  std::string format(element_type a) const { return std::to_string(a); }
  element_type parse(const std::string& s) const { return from_integer(parse_integer(s)); }
  RingDescriptor descriptor() const { return RingDescriptor::integers_mod(Integer(m_)); }

 private:
  std::uint64_t m_;
};

// ---------------------------------------------------------------------------
// Dense polynomials over F_p, used for the finite field modulus.

namespace fp {

using Poly = std::vector<std::uint64_t>;  // low degree first, no trailing zeros

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  Integer r, A(a), P(p);
  mpz_invert(r.get_mpz_t(), A.get_mpz_t(), P.get_mpz_t());
  return r.get_ui();
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

/// Remainder of a modulo a nonzero g.
inline Poly rem(Poly a, const Poly& g, std::uint64_t p) {
  trim(a);
  const std::size_t dg = g.size() - 1;
  const std::uint64_t lead_inv = inv_mod(g.back(), p);
  while (a.size() >= g.size()) {
    std::uint64_t c = a.back() * lead_inv % p;
    std::size_t shift = a.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) a[shift + i] = (a[shift + i] + (p - c) * g[i]) % p;
    trim(a);
  }
  return a;
}

inline Poly sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly pow_mod(Poly base, std::uint64_t e, const Poly& g, std::uint64_t p) {
  Poly result{1};
  base = rem(base, g, p);
  while (e > 0) {
    if (e & 1) result = rem(mul(result, base, p), g, p);
    e >>= 1;
    if (e > 0) base = rem(mul(base, base, p), g, p);
  }
  return result;
}

/// x^(p^k) mod g.
inline Poly frobenius_power_of_x(std::uint64_t k, const Poly& g, std::uint64_t p) {
  Poly h = rem(Poly{0, 1}, g, p);
  for (std::uint64_t i = 0; i < k; ++i) h = pow_mod(h, p, g, p);
  return h;
}

/// Rabin's test for a monic polynomial of degree >= 1.
inline bool is_irreducible(const Poly& g, std::uint64_t p) {
  const std::uint64_t f = g.size() - 1;
  if (f == 1) return true;
  const Poly x = rem(Poly{0, 1}, g, p);
  if (frobenius_power_of_x(f, g, p) != x) return false;
  for (auto l : prime_factors(f)) {
    Poly h = sub(frobenius_power_of_x(f / l, g, p), x, p);
    Poly d = gcd(g, h, p);
    if (d.size() != 1) return false;
  }
  return true;
}

}  // namespace fp

/// F_{p^f} realised as F_p[t]/(modulus). Elements are coefficient vectors of length f.
class FiniteField {
 public:
  using element_type = std::vector<std::uint64_t>;

  FiniteField(std::uint64_t p, std::uint64_t f, std::vector<std::uint64_t> modulus = {}) : p_(p), f_(f) {
    if (!is_prime(p)) throw ConstructionError("finite_field: p = " + std::to_string(p) + " is not prime");
    if (p >= (1ull << 31)) throw ConstructionError("finite_field: p must be < 2^31");
    if (f < 1) throw ConstructionError("finite_field: f must be >= 1");
    if (modulus.empty()) {
      modulus_ = default_modulus(p, f);
    } else {
      if (modulus.size() != f + 1) throw ConstructionError("finite_field: modulus must have degree f");
      for (auto c : modulus)
        if (c >= p) throw ConstructionError("finite_field: modulus coefficients must lie in [0, p)");
      if (modulus.back() != 1) throw ConstructionError("finite_field: modulus must be monic");
      if (!fp::is_irreducible(modulus, p))
        throw ConstructionError("finite_field: modulus is reducible over F_" + std::to_string(p));
      modulus_ = std::move(modulus);
    }
    size_ = 1;
    for (std::uint64_t i = 0; i < f_; ++i) size_ *= p_;
  }

  /// The lexicographically least monic irreducible polynomial of degree f, comparing
  /// coefficient lists low degree first.
  static std::vector<std::uint64_t> default_modulus(std::uint64_t p, std::uint64_t f) {
    std::vector<std::uint64_t> c(f + 1, 0);
    c[f] = 1;
    if (f == 1) return c;  // t
    while (true) {
      if (fp::is_irreducible(c, p)) return c;
      // Increment with c[f-1] as least significant digit so c[0] is most significant.
      std::size_t i = f;
      while (i-- > 0) {
        if (++c[i] < p) break;
        c[i] = 0;
        if (i == 0) throw ConstructionError("finite_field: no irreducible polynomial found");
      }
    }
  }

  std::uint64_t characteristic() const noexcept { return p_; }
  std::uint64_t degree() const noexcept { return f_; }
  std::uint64_t size() const noexcept { return size_; }
  const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }

  element_type zero() const { return element_type(f_, 0); }
  element_type one() const {
    element_type r(f_, 0);
    r[0] = 1;
    return r;
  }
  element_type from_integer(const Integer& n) const {
    element_type r(f_, 0);
    r[0] = mpz_fdiv_ui(n.get_mpz_t(), p_);
    return r;
  }
  element_type add(const element_type& a, const element_type& b) const {
    element_type r(f_);
    for (std::size_t i = 0; i < f_; ++i) {
      auto s = a[i] + b[i];
      r[i] = s >= p_ ? s - p_ : s;
    }
    return r;
  }
  element_type sub(const element_type& a, const element_type& b) const {
    element_type r(f_);
    for (std::size_t i = 0; i < f_; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p_ - b[i];
    return r;
  }
  element_type neg(const element_type& a) const {
    element_type r(f_);
    for (std::size_t i = 0; i < f_; ++i) r[i] = a[i] == 0 ? 0 : p_ - a[i];
    return r;
  }
  element_type mul(const element_type& a, const element_type& b) const {
    if (f_ == 1) return {a[0] * b[0] % p_};
    std::vector<std::uint64_t> prod(2 * f_ - 1, 0);
    for (std::size_t i = 0; i < f_; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < f_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    }
    // Reduce using t^f = -(modulus_0 + ... + modulus_{f-1} t^{f-1}).
    for (std::size_t k = prod.size(); k-- > f_;) {
      auto c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (std::size_t i = 0; i < f_; ++i)
        prod[k - f_ + i] = (prod[k - f_ + i] + (p_ - c) * modulus_[i]) % p_;
    }
    prod.resize(f_);
    return prod;
  }
  bool is_zero(const element_type& a) const {
    for (auto c : a)
      if (c != 0) return false;
    return true;
  }

  bool is_local_at(std::uint64_t p) const { return p == p_; }
  element_type unit_inverse(const Integer& n) const {
    auto r = mpz_fdiv_ui(n.get_mpz_t(), p_);
    if (r == 0) throw DomainError(n.get_str() + " is not a unit in F_" + std::to_string(p_));
    return from_integer(Integer(fp::inv_mod(r, p_)));
  }

  /// Bijection [0, p^f) <-> elements; digit i (base p) is the coefficient of t^i.
  element_type element_from_index(std::uint64_t index) const {
    element_type r(f_);
    for (std::size_t i = 0; i < f_; ++i) {
      r[i] = index % p_;
      index /= p_;
    }
    return r;
  }
  std::uint64_t index_of(const element_type& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = f_; i-- > 0;) idx = idx * p_ + a[i];
    return idx;
  }

  /// Polynomial in t, e.g. "2*t + 1".
  std::string format(const element_type& a) const {
    std::vector<IntPoly::Term> terms;
    for (std::size_t i = 0; i < f_; ++i)
      if (a[i] != 0) terms.emplace_back(Exponents{static_cast<std::uint16_t>(i)}, Integer(a[i]));
    static const std::string name = "t";
    return format_polynomial(IntPoly::from_terms(1, std::move(terms)), std::span(&name, 1));
  }
  element_type parse(const std::string& s) const {
    static const std::string name = "t";
    auto poly = parse_polynomial<Integer>(s, std::span(&name, 1));
    std::vector<std::uint64_t> dense;
    for (const auto& [e, c] : poly.terms()) {
      if (dense.size() <= e[0]) dense.resize(e[0] + 1u, 0);
      dense[e[0]] = mpz_fdiv_ui(c.get_mpz_t(), p_);
    }
    dense = fp::rem(dense, modulus_, p_);
    dense.resize(f_, 0);
    return dense;
  }

  RingDescriptor descriptor() const { return RingDescriptor::finite_field(p_, f_, modulus_); }

 private:
  std::uint64_t p_;
  std::uint64_t f_;
  std::uint64_t size_;
  std::vector<std::uint64_t> modulus_;
};

/// Base[v_1, ..., v_k] for Base = Integers or Rationals.
template <class Base>
  requires std::same_as<Base, Integers> || std::same_as<Base, Rationals>
class PolynomialRing {
 public:
  using coefficient_type = typename Base::element_type;
  using element_type = MultiPoly<coefficient_type>;

  explicit PolynomialRing(std::vector<std::string> variables) : names_(std::move(variables)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& v = names_[i];
      if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0])))
        throw ConstructionError("polynomial ring: variable names must start with a letter");
      for (char ch : v)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
          throw ConstructionError("polynomial ring: bad variable name '" + v + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[j] == v) throw ConstructionError("polynomial ring: duplicate variable '" + v + "'");
    }
  }

  const std::vector<std::string>& variables() const noexcept { return names_; }
  std::size_t nvars() const noexcept { return names_.size(); }

  element_type variable(std::size_t i) const { return element_type::variable(names_.size(), i); }

  element_type zero() const { return element_type(names_.size()); }
  element_type one() const { return element_type::constant(names_.size(), coefficient_type(1)); }
  element_type from_integer(const Integer& n) const {
    return element_type::constant(names_.size(), coefficient_type(n));
  }
  element_type add(const element_type& a, const element_type& b) const { return a + b; }
  element_type sub(const element_type& a, const element_type& b) const { return a - b; }
  element_type mul(const element_type& a, const element_type& b) const { return a * b; }
  element_type neg(const element_type& a) const { return -a; }
  bool is_zero(const element_type& a) const { return a.is_zero(); }

  element_type div_exact(const element_type& a, const Integer& n) const {
    if (n == 0) throw DomainError("division by zero");
    std::vector<typename element_type::Term> out;
    out.reserve(a.size());
    for (const auto& [e, c] : a.terms()) {
      if constexpr (std::same_as<Base, Integers>) {
        out.emplace_back(e, Integers{}.div_exact(c, n));
      } else {
        out.emplace_back(e, c / Rational(n));
      }
    }
    return element_type::from_terms(names_.size(), std::move(out));
  }

  std::string format(const element_type& a) const { return format_polynomial(a, names_); }
  element_type parse(const std::string& s) const { return parse_polynomial<coefficient_type>(s, names_); }

  RingDescriptor descriptor() const {
    return RingDescriptor::polynomial(
        std::same_as<Base, Integers> ? RingKind::Integers : RingKind::Rationals, names_);
  }

 private:
  std::vector<std::string> names_;
};

using IntPolyRing = PolynomialRing<Integers>;
using RatPolyRing = PolynomialRing<Rationals>;

/// Runtime-selected coefficient ring.
using AnyRing = std::variant<Integers, Rationals, IntegersMod, FiniteField, IntPolyRing, RatPolyRing>;

inline AnyRing make_ring(const RingDescriptor& d) {
  switch (d.kind) {
    case RingKind::Integers:
      return Integers{};
    case RingKind::Rationals:
      return Rationals{};
    case RingKind::IntegersMod:
      return IntegersMod(d.m);
    case RingKind::FiniteField:
      return FiniteField(d.p, d.f, d.modulus);
    case RingKind::Polynomial:
      if (d.base == RingKind::Integers) return IntPolyRing(d.variables);
      if (d.base == RingKind::Rationals) return RatPolyRing(d.variables);
      throw ConstructionError("polynomial ring: base must be integers or rationals");
  }
  throw ConstructionError("unknown ring kind");
}

}  // namespace wittn
