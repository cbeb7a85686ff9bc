#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <span>
#include <type_traits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"

namespace wittn {

/// Dense exponent vector of a monomial; entry i is the power of variable i.
using Exponents = boost::container::small_vector<std::uint16_t, 16>;

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : e) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::uint32_t total_degree(const Exponents& e) {
  std::uint32_t d = 0;
  for (auto x : e) d += x;
  return d;
}

/// Graded lexicographic order; the first variable is the most significant.
inline bool grlex_less(const Exponents& a, const Exponents& b) {
  auto da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Sparse multivariate polynomial over Integer or Rational coefficients.
///
/// Terms are kept sorted by descending grlex order with no zero coefficients,
/// so two polynomials in the same variables are equal iff their term lists are.
template <class Coeff>
class MultiPoly {
 public:
  using Term = std::pair<Exponents, Coeff>;

  MultiPoly() = default;
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Coeff& c) {
    MultiPoly p(nvars);
    if (c != 0) p.terms_.emplace_back(Exponents(nvars, 0), c);
    return p;
  }

  static MultiPoly variable(std::size_t nvars, std::size_t index, std::uint16_t exponent = 1) {
    MultiPoly p(nvars);
    Exponents e(nvars, 0);
    e.at(index) = exponent;
    p.terms_.emplace_back(std::move(e), Coeff(1));
    return p;
  }

  /// Builds a canonical polynomial from arbitrary terms (duplicates are merged).
  static MultiPoly from_terms(std::size_t nvars, std::vector<Term> terms) {
    std::unordered_map<Exponents, Coeff, ExponentsHash> acc;
    acc.reserve(terms.size());
    for (auto& [e, c] : terms) {
      if (e.size() != nvars) throw DimensionMismatch("monomial has wrong number of variables");
      acc[e] += c;
    }
    return from_map(nvars, std::move(acc));
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, false); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, true); }

  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r = a;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend MultiPoly operator*(const Coeff& c, const MultiPoly& a) {
    MultiPoly r(a.nvars_);
    if (c == 0) return r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& [e, v] : a.terms_) r.terms_.emplace_back(e, c * v);
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return MultiPoly(a.nvars_);
    std::unordered_map<Exponents, Coeff, ExponentsHash> acc;
    acc.reserve(a.size() * b.size() / 2 + 8);
    Exponents e(a.nvars_, 0);
    Coeff prod;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
        prod = ca * cb;
        acc[e] += prod;
      }
    }
    return from_map(a.nvars_, std::move(acc));
  }

  MultiPoly pow(std::uint64_t k) const {
    MultiPoly r = constant(nvars_, Coeff(1));
    for (std::uint64_t i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Re-expresses the polynomial in a larger variable set: variable i becomes map[i].
  MultiPoly rename(std::size_t new_nvars, std::span<const std::size_t> map) const {
    if (map.size() != nvars_) throw DimensionMismatch("variable map has wrong length");
    MultiPoly r(new_nvars);
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (const auto& [e, c] : terms_) {
      Exponents ne(new_nvars, 0);
      for (std::size_t i = 0; i < nvars_; ++i) ne.at(map[i]) += e[i];
      terms.emplace_back(std::move(ne), c);
    }
    return from_terms(new_nvars, std::move(terms));
  }

  template <class F>
  void for_each_coefficient(F&& f) const {
    for (const auto& t : terms_) f(t.second);
  }

  template <class Out, class F>
  MultiPoly<Out> map_coefficients(F&& f) const {
    std::vector<typename MultiPoly<Out>::Term> out;
    out.reserve(terms_.size());
    for (const auto& [e, c] : terms_) out.emplace_back(e, f(c));
    return MultiPoly<Out>::from_terms(nvars_, std::move(out));
  }

 private:
  static void check_same(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars_ != b.nvars_) throw DimensionMismatch("polynomials have different variable counts");
  }

  static MultiPoly from_map(std::size_t nvars, std::unordered_map<Exponents, Coeff, ExponentsHash>&& acc) {
    MultiPoly r(nvars);
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) r.terms_.emplace_back(e, std::move(c));
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return grlex_less(y.first, x.first); });
    return r;
  }

  static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, bool subtract) {
    check_same(a, b);
    MultiPoly r(a.nvars_);
    r.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && grlex_less(j->first, i->first))) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || grlex_less(i->first, j->first)) {
        r.terms_.emplace_back(j->first, subtract ? Coeff(-j->second) : j->second);
        ++j;
      } else {
        Coeff c = subtract ? Coeff(i->second - j->second) : Coeff(i->second + j->second);
        if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

using IntPoly = MultiPoly<Integer>;
using RatPoly = MultiPoly<Rational>;

namespace detail {

inline std::string coeff_string(const Integer& c) { return c.get_str(); }
inline std::string coeff_string(const Rational& c) { return c.get_str(); }

}  // namespace detail

/// Human-readable form such as "X1^2 + 2*X2 - 1"; also the canonical ring-element string.
template <class Coeff>
std::string format_polynomial(const MultiPoly<Coeff>& p, std::span<const std::string> names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    bool negative = c < 0;
    Coeff mag = negative ? Coeff(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += detail::coeff_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += detail::coeff_string(mag) + "*" + mono;
    }
  }
  return out;
}

/// Inverse of format_polynomial. Accepts "+"/"-" separated terms of the form
/// coeff*name^k*name^k with optional whitespace; coefficients may be n or n/d.
template <class Coeff>
MultiPoly<Coeff> parse_polynomial(const std::string& text, std::span<const std::string> names) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) throw DomainError("empty polynomial string");
  const std::size_t nv = names.size();
  std::vector<typename MultiPoly<Coeff>::Term> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    } else if (!terms.empty()) {
      throw DomainError("malformed polynomial: '" + text + "'");
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    if (term.empty()) throw DomainError("malformed polynomial: '" + text + "'");
    Coeff coeff(1);
    Exponents e(nv, 0);
    std::size_t start = 0;
    while (start <= term.size()) {
      std::size_t star = term.find('*', start);
      std::string factor = term.substr(start, star == std::string::npos ? std::string::npos : star - start);
      if (factor.empty()) throw DomainError("malformed polynomial: '" + text + "'");
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        Coeff c;
        if (c.set_str(factor, 10) != 0) throw DomainError("bad coefficient '" + factor + "'");
        if constexpr (std::is_same_v<Coeff, Rational>) c.canonicalize();
        coeff *= c;
      } else {
        std::string name = factor;
        unsigned long k = 1;
        if (auto caret = factor.find('^'); caret != std::string::npos) {
          name = factor.substr(0, caret);
          k = std::stoul(factor.substr(caret + 1));
        }
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw DomainError("unknown variable '" + name + "'");
        e[static_cast<std::size_t>(it - names.begin())] += static_cast<std::uint16_t>(k);
      }
      if (star == std::string::npos) break;
      start = star + 1;
    }
    if (negative) coeff = -coeff;
    terms.emplace_back(std::move(e), std::move(coeff));
  }
  return MultiPoly<Coeff>::from_terms(nv, std::move(terms));
}

}  // namespace wittn
