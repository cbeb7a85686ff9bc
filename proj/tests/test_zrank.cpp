#include <gtest/gtest.h>

#include <random>

#include "wittn/zrank.hpp"

using namespace wittn;

namespace {

/// Counts s in a box by brute force: degree 2*sum floor((s_i-1)/c_i) + 1 for c_i = a_i on I, 1 off I.
std::vector<Integer> vertex_brute(const std::vector<std::uint64_t>& a, const AxisSet& I, std::uint64_t D) {
  const std::size_t n = a.size();
  std::vector<std::uint64_t> c(n, 1);
  for (auto i : I) c[i] = a[i];
  const std::uint64_t jmax = (D + 1) / 2;
  std::vector<Integer> out(D + 1, 0);
  std::vector<std::uint64_t> s(n, 1);
  while (true) {
    std::uint64_t dim = 0;
    for (std::size_t i = 0; i < n; ++i) dim += (s[i] - 1) / c[i];
    if (2 * dim + 1 <= D) out[2 * dim + 1] += 1;
    std::size_t i = 0;
    while (i < n && ++s[i] > c[i] * jmax) s[i++] = 1;
    if (i == n) break;
  }
  return out;
}

/// (1+t)^{n-1} * sum_I (-1)^{n-|I|} vertex_I, the Euler characteristic of the cube of vertices.
std::vector<Integer> k_series_brute(const std::vector<std::uint64_t>& a, std::uint64_t D) {
  const std::size_t n = a.size();
  std::vector<Integer> alt(D + 1, 0);
  for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
    AxisSet I;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) I.push_back(i);
    const auto v = vertex_brute(a, I, D);
    const int sign = (n - I.size()) % 2 ? -1 : 1;
    for (std::uint64_t d = 0; d <= D; ++d) alt[d] += sign * v[d];
  }
  std::vector<Integer> out(D + 1, 0);
  for (std::uint64_t d = 0; d <= D; ++d)
    for (std::size_t k = 0; k < n && d + k <= D; ++k) out[d + k] += alt[d] * binomial(n - 1, k);
  return out;
}

}  // namespace

TEST(ZRank, KSeriesExamples) {
  const std::vector<std::uint64_t> a3{3};
  const auto s = k_rational_series(a3, 9);
  for (std::uint64_t d = 1; d <= 9; ++d) EXPECT_EQ(s[d], d % 2 ? 2 : 0);
  const std::vector<std::uint64_t> a22{2, 2};
  const auto t = k_rational_series(a22, 4);
  EXPECT_EQ(t.coefficients, (std::vector<Integer>{0, 1, 1, 2, 2}));
  const std::vector<std::uint64_t> a13{1, 3};
  for (const auto& c : k_rational_series(a13, 10).coefficients) EXPECT_EQ(c, 0);
  EXPECT_THROW(k_rational_series(a3, 0), DomainError);
}

TEST(ZRank, VertexSeriesExamples) {
  const std::vector<std::uint64_t> a2{2}, a23{2, 3};
  const auto s = tc_vertex_series(a2, {}, 7);
  for (std::uint64_t d = 1; d <= 7; ++d) EXPECT_EQ(s[d], d % 2 ? 1 : 0);
  EXPECT_EQ(tc_vertex_series(a23, {0, 1}, 3)[3], 12);
  EXPECT_EQ(tc_vertex_series_oracle(a2, {0}, 1)[1], 2);
  EXPECT_EQ(tc_vertex_series_oracle(a23, {}, 1)[1], 1);
}

TEST(ZRank, VertexSeriesMatchesOracles) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<std::uint64_t> a(n);
    for (auto& ai : a) ai = 1 + rng() % 4;
    AxisSet I;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1) I.push_back(i);
    const std::uint64_t D = 1 + rng() % 20;
    const auto closed = tc_vertex_series(a, I, D);
    EXPECT_EQ(closed, tc_vertex_series_oracle(a, I, D));
    if (D <= 12) EXPECT_EQ(closed.coefficients, vertex_brute(a, I, D));
  }
}

TEST(ZRank, KSeriesMatchesCubeEulerCharacteristic) {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::uint64_t> a(n, 2);
    while (true) {
      EXPECT_EQ(k_rational_series(a, 11).coefficients, k_series_brute(a, 11));
      std::size_t i = 0;
      while (i < n && ++a[i] > 4) a[i++] = 2;
      if (i == n) break;
    }
  }
}
