#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"
#include "wittn/truncation.hpp"

namespace wittn {

/// Integer power series sum_m c_m t^m truncated at degree `cutoff`.
struct PoincareSeries {
  std::uint64_t cutoff = 0;
  std::vector<Integer> coefficients;  // index = degree, 0..cutoff

  explicit PoincareSeries(std::uint64_t d = 0) : cutoff(d), coefficients(d + 1, 0) {}

  const Integer& operator[](std::uint64_t degree) const { return coefficients.at(degree); }
  friend bool operator==(const PoincareSeries&, const PoincareSeries&) = default;
};

namespace detail {

inline void check_cutoff(std::uint64_t D) {
  if (D < 1) throw DomainError("degree cutoff must be >= 1");
}

}  // namespace detail

/// sum_{j>=1} t^{2j-1} (1+t)^{n-1} binom(n+j-2, n-1) prod (a_i - 1).
inline PoincareSeries k_rational_series(std::span<const std::uint64_t> a, std::uint64_t D) {
  detail::check_cutoff(D);
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("need at least one variable");
  Integer prod = 1;
  for (auto ai : a) {
    if (ai < 1) throw DomainError("truncation exponents must be >= 1");
    prod *= ai - 1;
  }
  PoincareSeries out(D);
  for (std::uint64_t j = 1; 2 * j - 1 <= D; ++j) {
    const Integer base = binomial(n + j - 2, n - 1) * prod;
    for (std::uint64_t k = 0; k <= n - 1 && 2 * j - 1 + k <= D; ++k)
      out.coefficients[2 * j - 1 + k] += base * binomial(n - 1, k);
  }
  return out;
}

/// sum_{j>=1} t^{2j-1} binom(n+j-2, n-1) prod_{i in I} a_i.
inline PoincareSeries tc_vertex_series(std::span<const std::uint64_t> a, const AxisSet& I, std::uint64_t D) {
  detail::check_cutoff(D);
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("need at least one variable");
  detail::check_axes(n, I);
  Integer prod = 1;
  for (auto i : I) prod *= a[i];
  PoincareSeries out(D);
  for (std::uint64_t j = 1; 2 * j - 1 <= D; ++j) out.coefficients[2 * j - 1] = binomial(n + j - 2, n - 1) * prod;
  return out;
}

/// Counts s in N^n with sum_i floor((s_i - 1) / a_i^{[i in I]}) = j - 1 for each degree 2j-1.
inline PoincareSeries tc_vertex_series_oracle(std::span<const std::uint64_t> a, const AxisSet& I, std::uint64_t D) {
  detail::check_cutoff(D);
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("need at least one variable");
  detail::check_axes(n, I);
  const auto scale = detail::sq_scales(a, I);
  PoincareSeries out(D);
  for (std::uint64_t j = 1; 2 * j - 1 <= D; ++j) {
    std::uint64_t count = 0;
    auto rec = [&](auto&& self, std::size_t axis, std::uint64_t remaining) -> void {
      if (axis + 1 == n) {
        // floor((s - 1) / c) == remaining has exactly c solutions.
        count += scale[axis];
        return;
      }
      for (std::uint64_t s = 1; (s - 1) / scale[axis] <= remaining; ++s)
        self(self, axis + 1, remaining - (s - 1) / scale[axis]);
    };
    rec(rec, 0, j - 1);
    out.coefficients[2 * j - 1] = count;
  }
  return out;
}

}  // namespace wittn
