#pragma once

#include <memory>
#include <random>
#include <vector>

#include "wittn/rings.hpp"
#include "wittn/truncation.hpp"
#include "wittn/witt.hpp"

namespace wittn::testing {

inline Integer random_element(const Integers&, std::mt19937_64& rng) {
  return Integer(static_cast<long>(rng() % 41) - 20);
}
inline Rational random_element(const Rationals&, std::mt19937_64& rng) {
  Rational r(static_cast<long>(rng() % 21) - 10, static_cast<long>(1 + rng() % 6));
  r.canonicalize();
  return r;
}
inline std::uint64_t random_element(const IntegersMod& z, std::mt19937_64& rng) {
  return z.from_integer(Integer(static_cast<unsigned long>(rng() % 1000)));
}
inline FiniteField::element_type random_element(const FiniteField& k, std::mt19937_64& rng) {
  return k.element_from_index(rng() % k.size());
}

template <CommutativeRing R>
WittVector<R> random_vector(const WittRing<R>& W, std::mt19937_64& rng) {
  std::vector<typename R::element_type> c;
  for (std::size_t i = 0; i < W.set().size(); ++i) c.push_back(random_element(W.base(), rng));
  return W.make(std::move(c));
}

template <CommutativeRing R>
WittRing<R> witt_ring(R ring, TruncationSet S) {
  return WittRing<R>(std::make_shared<const R>(std::move(ring)), std::make_shared<const TruncationSet>(std::move(S)));
}

/// Random division-closed set with at most `max_points` points in dimension n.
inline TruncationSet random_set(std::size_t n, std::size_t max_points, std::mt19937_64& rng) {
  while (true) {
    std::vector<Point> gens;
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t g = 0; g < k; ++g) {
      std::vector<std::uint64_t> c(n);
      for (auto& v : c) v = 1 + rng() % (n == 1 ? 12 : 6);
      gens.emplace_back(std::move(c));
    }
    auto S = closure(gens);
    if (S.size() <= max_points) return S;
  }
}

/// All vectors of W_S(k) for a finite field k, in index order.
inline std::vector<WittVector<FiniteField>> all_vectors(const WittRing<FiniteField>& W) {
  const auto& k = W.base();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < W.set().size(); ++i) total *= k.size();
  std::vector<WittVector<FiniteField>> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<FiniteField::element_type> c;
    auto v = idx;
    for (std::size_t i = 0; i < W.set().size(); ++i) {
      c.push_back(k.element_from_index(v % k.size()));
      v /= k.size();
    }
    out.push_back(W.make(std::move(c)));
  }
  return out;
}

}  // namespace wittn::testing
