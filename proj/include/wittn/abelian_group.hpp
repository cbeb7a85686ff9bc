#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"

namespace wittn {

/// Finite abelian group as a descending list of prime-power cyclic orders.
class AbelianGroup {
 public:
  AbelianGroup() = default;

  static AbelianGroup from_factors(const std::vector<Integer>& factors) {
    AbelianGroup g;
    for (const auto& q : factors) {
      if (q < 2 || !is_prime_power(q)) throw DomainError("abelian group factor " + q.get_str() + " is not a prime power > 1");
      ++g.counts_[q];
    }
    return g;
  }

  /// Adds `copies` copies of Z/p^m (no-op when m == 0).
  void add_cyclic(std::uint64_t p, std::uint64_t m, const Integer& copies = 1) {
    if (m == 0 || copies == 0) return;
    counts_[ipow(Integer(p), m)] += copies;
  }

  /// Invariant factors, largest first.
  std::vector<Integer> factors() const {
    std::vector<Integer> out;
    for (const auto& [q, c] : counts_)
      for (Integer k = 0; k < c; ++k) out.push_back(q);
    return out;
  }

  /// Multiplicity of each factor, largest factor first.
  const std::map<Integer, Integer, std::greater<>>& multiplicities() const noexcept { return counts_; }

  std::size_t rank() const {
    Integer r = 0;
    for (const auto& [q, c] : counts_) r += c;
    return r.get_ui();
  }

  bool trivial() const noexcept { return counts_.empty(); }

  Integer order() const {
    Integer r = 1;
    for (const auto& [q, c] : counts_) {
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), q.get_mpz_t(), c.get_ui());
      r *= pw;
    }
    return r;
  }

  AbelianGroup direct_sum(const AbelianGroup& other) const {
    AbelianGroup g = *this;
    for (const auto& [q, c] : other.counts_) g.counts_[q] += c;
    return g;
  }

  /// Direct sum of `copies` copies of this group.
  AbelianGroup power(const Integer& copies) const {
    AbelianGroup g;
    if (copies == 0) return g;
    for (const auto& [q, c] : counts_) g.counts_[q] = c * copies;
    return g;
  }

  /// "Z/9 + Z/3 + Z/3", or "0" for the trivial group.
  std::string str() const {
    if (counts_.empty()) return "0";
    std::string s;
    for (const auto& q : factors()) s += (s.empty() ? "Z/" : " + Z/") + q.get_str();
    return s;
  }

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  static bool is_prime_power(Integer q) {
    for (unsigned long d = 2; Integer(d) * d <= q; ++d) {
      if (q % d != 0) continue;
      while (q % d == 0) q /= d;
      return q == 1;
    }
    return true;
  }

  std::map<Integer, Integer, std::greater<>> counts_;
};

}  // namespace wittn
