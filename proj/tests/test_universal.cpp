#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "wittn/universal.hpp"

using namespace wittn;

namespace {

IntPoly parse(const UniversalPolynomial& u, const std::string& text) {
  const auto names = u.variable_names();
  return parse_polynomial<Integer>(text, names);
}

std::vector<std::uint64_t> upto(std::uint64_t m) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t d = 1; d <= m; ++d) v.push_back(d);
  return v;
}

}  // namespace

TEST(Universal, SumAndProductOnOneTwo) {
  const auto sum = universal_polys({1, 2}, WittOp::sum());
  ASSERT_EQ(sum->polys.size(), 2u);
  EXPECT_EQ(sum->polys[0]->poly, parse(*sum->polys[0], "X1 + Y1"));
  EXPECT_EQ(sum->polys[1]->poly, parse(*sum->polys[1], "X2 + Y2 - X1*Y1"));

  const auto prod = universal_polys({1, 2}, WittOp::product());
  EXPECT_EQ(prod->polys[0]->poly, parse(*prod->polys[0], "X1*Y1"));
  EXPECT_EQ(prod->polys[1]->poly, parse(*prod->polys[1], "X1^2*Y2 + X2*Y1^2 + 2*X2*Y2"));
}

TEST(Universal, DegreeOneAnswers) {
  const auto neg = universal_polys({1}, WittOp::negation());
  EXPECT_EQ(neg->polys[0]->poly, parse(*neg->polys[0], "-X1"));
  const auto neg2 = universal_polys({1, 2}, WittOp::negation());
  EXPECT_EQ(neg2->polys[1]->poly, parse(*neg2->polys[1], "-X1^2 - X2"));
  const auto frob = universal_polys({1, 2}, WittOp::frobenius(2));
  ASSERT_EQ(frob->outputs, std::vector<std::uint64_t>{1});
  EXPECT_EQ(frob->polys[0]->poly, parse(*frob->polys[0], "X1^2 + 2*X2"));
}

TEST(Universal, GhostCompatibilityOverIntegers) {
  // Evaluating the sum/product polynomials at integers must match ghost arithmetic.
  const auto set = upto(12);
  const auto sum = universal_polys(set, WittOp::sum());
  const auto prod = universal_polys(set, WittOp::product());
  std::vector<Integer> x(13), y(13);
  for (std::uint64_t d = 1; d <= 12; ++d) {
    x[d] = Integer(d % 5) - 2;
    y[d] = Integer(d % 3) + 1;
  }
  auto eval = [&](const UniversalPolynomial& u) {
    Integer acc = 0;
    for (const auto& [e, c] : u.poly.terms()) {
      Integer term = c;
      for (std::size_t v = 0; v < e.size(); ++v) {
        const auto idx = u.support[v % u.support.size()];
        Integer base = v < u.support.size() ? x[idx] : y[idx];
        Integer pw;
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), e[v]);
        term *= pw;
      }
      acc += term;
    }
    return acc;
  };
  std::vector<Integer> s(13), p(13);
  for (std::uint64_t d = 1; d <= 12; ++d) {
    s[d] = eval(*sum->polys[d - 1]);
    p[d] = eval(*prod->polys[d - 1]);
  }
  auto ghost = [](const std::vector<Integer>& v, std::uint64_t m) {
    Integer w = 0;
    for (auto t : divisors(m)) {
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), v[t].get_mpz_t(), m / t);
      w += Integer(t) * pw;
    }
    return w;
  };
  for (std::uint64_t m = 1; m <= 12; ++m) {
    EXPECT_EQ(ghost(s, m), ghost(x, m) + ghost(y, m));
    EXPECT_EQ(ghost(p, m), ghost(x, m) * ghost(y, m));
  }
}

TEST(Universal, RejectsNonClosedSets) {
  EXPECT_THROW(universal_polys({1, 4}, WittOp::sum()), DomainError);
  EXPECT_THROW(universal_polys({2, 1}, WittOp::sum()), DomainError);
}

TEST(Universal, RecomputeIsBitIdentical) {
  const auto set = upto(10);
  std::vector<nlohmann::json> first;
  for (auto op : {WittOp::sum(), WittOp::product(), WittOp::negation(), WittOp::frobenius(3)})
    first.push_back(table_to_json(*universal_polys(set, op)));
  UniversalCache::instance().clear();
  std::size_t k = 0;
  for (auto op : {WittOp::sum(), WittOp::product(), WittOp::negation(), WittOp::frobenius(3)})
    EXPECT_EQ(table_to_json(*universal_polys(set, op)).dump(), first[k++].dump());
}

TEST(Universal, JsonRoundTrip) {
  const auto t = universal_polys(upto(6), WittOp::product());
  const auto back = table_from_json(table_to_json(*t));
  EXPECT_EQ(back.set, t->set);
  EXPECT_EQ(back.outputs, t->outputs);
  ASSERT_EQ(back.polys.size(), t->polys.size());
  for (std::size_t i = 0; i < back.polys.size(); ++i) EXPECT_EQ(back.polys[i]->poly, t->polys[i]->poly);
}

TEST(Universal, PersistsToCacheDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "wittn-cache-test";
  std::filesystem::remove_all(dir);
  ::setenv("WITT_CACHE_DIR", dir.c_str(), 1);
  UniversalCache::instance().clear();
  const auto built = table_to_json(*universal_polys(upto(8), WittOp::sum())).dump();
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  UniversalCache::instance().clear();
  EXPECT_EQ(table_to_json(*universal_polys(upto(8), WittOp::sum())).dump(), built);
  ::unsetenv("WITT_CACHE_DIR");
  std::filesystem::remove_all(dir);
}
