#include <gtest/gtest.h>

#include <random>

#include "wittn/rings.hpp"

using namespace wittn;

namespace {

template <CommutativeRing R>
void check_axioms(const R& ring, const std::vector<typename R::element_type>& pool, std::mt19937_64& rng, int trials) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int t = 0; t < trials; ++t) {
    const auto& a = pool[pick(rng)];
    const auto& b = pool[pick(rng)];
    const auto& c = pool[pick(rng)];
    EXPECT_EQ(ring.add(ring.add(a, b), c), ring.add(a, ring.add(b, c)));
    EXPECT_EQ(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c)));
    EXPECT_EQ(ring.add(a, b), ring.add(b, a));
    EXPECT_EQ(ring.mul(a, b), ring.mul(b, a));
    EXPECT_EQ(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c)));
    EXPECT_EQ(ring.add(a, ring.zero()), a);
    EXPECT_EQ(ring.mul(a, ring.one()), a);
    EXPECT_TRUE(ring.is_zero(ring.add(a, ring.neg(a))));
    EXPECT_EQ(ring.sub(a, b), ring.add(a, ring.neg(b)));
  }
}

template <CommutativeRing R>
void check_embed_homomorphism(const R& ring, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pick(-1000000, 1000000);
  for (int t = 0; t < 200; ++t) {
    const Integer a = pick(rng), b = pick(rng);
    EXPECT_EQ(ring.from_integer(a + b), ring.add(ring.from_integer(a), ring.from_integer(b)));
    EXPECT_EQ(ring.from_integer(a * b), ring.mul(ring.from_integer(a), ring.from_integer(b)));
  }
}

std::vector<FiniteField::element_type> all_elements(const FiniteField& k) {
  std::vector<FiniteField::element_type> out;
  for (std::uint64_t i = 0; i < k.size(); ++i) out.push_back(k.element_from_index(i));
  return out;
}

}  // namespace

TEST(Rings, IntegersModEmbedsResidue) {
  IntegersMod z4(4);
  EXPECT_EQ(z4.from_integer(7), 3u);
  EXPECT_EQ(z4.from_integer(-1), 3u);
  EXPECT_THROW(IntegersMod(1), ConstructionError);
}

TEST(Rings, FiniteFieldCharacteristic) {
  FiniteField f3(3, 1);
  EXPECT_TRUE(f3.is_zero(f3.from_integer(3)));
}

TEST(Rings, F4Multiplication) {
  FiniteField f4(2, 2, {1, 1, 1});
  const FiniteField::element_type x{0, 1}, x1{1, 1};
  EXPECT_EQ(f4.mul(x, x1), f4.one());
}

TEST(Rings, DefaultModuli) {
  EXPECT_EQ(FiniteField::default_modulus(2, 2), (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(FiniteField::default_modulus(3, 2), (std::vector<std::uint64_t>{1, 0, 1}));
  EXPECT_EQ(FiniteField::default_modulus(5, 1), (std::vector<std::uint64_t>{0, 1}));
  EXPECT_EQ(FiniteField(2, 3).modulus(), (std::vector<std::uint64_t>{1, 0, 1, 1}));
}

TEST(Rings, FiniteFieldRejectsBadInput) {
  EXPECT_THROW(FiniteField(4, 1), ConstructionError);
  EXPECT_THROW(FiniteField(3, 2, {1, 2, 1}), ConstructionError);  // (x+1)^2
  EXPECT_THROW(FiniteField(2, 2, {1, 1}), ConstructionError);
  EXPECT_THROW(FiniteField(2, 0), ConstructionError);
}

TEST(Rings, DivExact) {
  Integers z;
  EXPECT_EQ(z.div_exact(10, 2), 5);
  EXPECT_THROW(z.div_exact(7, 2), NonIntegralDivision);
  IntPolyRing zxy({"X1", "Y1"});
  const auto xy = zxy.mul(zxy.variable(0), zxy.variable(1));
  EXPECT_EQ(zxy.div_exact(zxy.mul(zxy.from_integer(2), xy), 2), xy);
  EXPECT_THROW(zxy.div_exact(xy, 2), NonIntegralDivision);
  Rationals q;
  EXPECT_EQ(q.div_exact(Rational(1), 2), Rational(1, 2));
}

TEST(Rings, AxiomsOnRandomTriples) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> small(-50, 50);

  Integers z;
  std::vector<Integer> zs;
  for (int i = 0; i < 40; ++i) zs.push_back(Integer(small(rng)) * Integer("123456789123456789"));
  check_axioms(z, zs, rng, 200);

  Rationals q;
  std::vector<Rational> qs;
  for (int i = 0; i < 40; ++i) {
    long den = small(rng);
    Rational r(small(rng), den == 0 ? 7 : den);
    r.canonicalize();
    qs.push_back(r);
  }
  check_axioms(q, qs, rng, 200);

  for (std::uint64_t m : {2u, 4u, 12u, 97u}) {
    IntegersMod zm(m);
    std::vector<std::uint64_t> xs;
    for (std::uint64_t i = 0; i < m; ++i) xs.push_back(i);
    check_axioms(zm, xs, rng, 200);
  }

  IntegersMod big(Integer(1) << 61);
  std::vector<std::uint64_t> bs;
  std::uniform_int_distribution<std::uint64_t> any(0, (std::uint64_t{1} << 61) - 1);
  for (int i = 0; i < 40; ++i) bs.push_back(any(rng));
  check_axioms(big, bs, rng, 200);

  for (auto [p, f] : {std::pair{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 4}, {5, 3}}) {
    FiniteField k(p, f);
    check_axioms(k, all_elements(k), rng, 200);
  }

  IntPolyRing zx({"X", "Y"});
  std::vector<IntPolyRing::element_type> ps;
  for (int i = 0; i < 20; ++i) {
    auto e = zx.from_integer(small(rng));
    e = zx.add(e, zx.mul(zx.from_integer(small(rng)), zx.variable(0)));
    e = zx.add(e, zx.mul(zx.from_integer(small(rng)), zx.mul(zx.variable(1), zx.variable(0))));
    ps.push_back(e);
  }
  check_axioms(zx, ps, rng, 100);
}

TEST(Rings, EmbedIntIsHomomorphism) {
  std::mt19937_64 rng(2);
  check_embed_homomorphism(Integers{}, rng);
  check_embed_homomorphism(Rationals{}, rng);
  check_embed_homomorphism(IntegersMod(9), rng);
  check_embed_homomorphism(FiniteField(3, 2), rng);
  check_embed_homomorphism(IntPolyRing({"X"}), rng);
}

TEST(Rings, FiniteFieldFrobeniusFixesElements) {
  std::mt19937_64 rng(3);
  for (auto [p, f] : {std::pair{2, 3}, {3, 2}, {5, 2}, {7, 3}}) {
    FiniteField k(p, f);
    std::uniform_int_distribution<std::uint64_t> pick(0, k.size() - 1);
    for (int t = 0; t < 200; ++t) {
      const auto x = k.element_from_index(pick(rng));
      EXPECT_EQ(ring_pow(k, x, k.size()), x);
    }
  }
}

TEST(Rings, FormatParseRoundTrip) {
  FiniteField f9(3, 2);
  for (const auto& x : all_elements(f9)) EXPECT_EQ(f9.parse(f9.format(x)), x);
  EXPECT_EQ(f9.format({1, 2}), "2*t + 1");
  IntegersMod z6(6);
  EXPECT_EQ(z6.parse("-1"), 5u);
  Rationals q;
  EXPECT_EQ(q.format(q.parse("-6/4")), "-3/2");
  IntPolyRing r({"X1", "Y1"});
  const auto p = r.parse("X1^2*Y1 - 3*Y1 + 2");
  EXPECT_EQ(r.parse(r.format(p)), p);
  EXPECT_THROW(r.parse("Z + 1"), DomainError);
}

TEST(Rings, Locality) {
  EXPECT_TRUE(IntegersMod(9).is_local_at(3));
  EXPECT_FALSE(IntegersMod(6).is_local_at(3));
  EXPECT_TRUE(FiniteField(3, 2).is_local_at(3));
  EXPECT_FALSE(FiniteField(3, 2).is_local_at(2));
  EXPECT_EQ(IntegersMod(9).mul(IntegersMod(9).unit_inverse(2), 2), 1u);
}

TEST(Rings, MakeRingFromDescriptor) {
  auto r = make_ring(RingDescriptor::finite_field(3, 2));
  ASSERT_TRUE(std::holds_alternative<FiniteField>(r));
  EXPECT_EQ(std::get<FiniteField>(r).descriptor(), RingDescriptor::finite_field(3, 2, {1, 0, 1}));
  EXPECT_THROW(make_ring(RingDescriptor::integers_mod(0)), ConstructionError);
  EXPECT_THROW(make_ring(RingDescriptor::polynomial(RingKind::Integers, {"X", "X"})), ConstructionError);
}
