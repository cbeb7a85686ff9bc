#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wittn/abelian_group.hpp"
#include "wittn/arith.hpp"
#include "wittn/error.hpp"
#include "wittn/rings.hpp"
#include "wittn/truncation.hpp"
#include "wittn/witt.hpp"

namespace wittn {

/// k = F_{p^f} and truncation exponents a_1..a_n of k[x_1..x_n]/(x_i^{a_i}).
struct ProblemSpec {
  std::uint64_t p = 2;
  std::uint64_t f = 1;
  std::vector<std::uint64_t> a;

  std::size_t n() const noexcept { return a.size(); }

  void validate() const {
    if (!is_prime(p)) throw ConstructionError("p = " + std::to_string(p) + " is not prime");
    if (f < 1) throw ConstructionError("f must be >= 1");
    if (a.empty()) throw ConstructionError("need at least one variable");
    for (auto ai : a)
      if (ai < 2) throw ConstructionError("truncation exponents must be >= 2");
  }

  /// True iff p divides none of the a_i.
  bool tame() const {
    return std::none_of(a.begin(), a.end(), [&](std::uint64_t ai) { return ai % p == 0; });
  }

  Integer field_size() const { return ipow(Integer(p), f); }

  AxisSet all_axes() const {
    AxisSet I(n());
    for (std::size_t i = 0; i < n(); ++i) I[i] = i;
    return I;
  }
};

/// Additive group of W_S(F_{p^f}): Z/p^m (f copies) for each t in S with p ∤ gcd(t),
/// where m is the length of the p-line through t.
inline AbelianGroup witt_group(const TruncationSet& S, std::uint64_t p, std::uint64_t f) {
  AbelianGroup g;
  for (const auto& t : S.points()) {
    if (t.content() % p == 0) continue;
    g.add_cyclic(p, p_line(S, t, p), f);
  }
  return g;
}

/// All size-s subsets of {0..n-1} in lexicographic order.
inline std::vector<AxisSet> subsets_of_size(std::size_t n, std::size_t s) {
  std::vector<AxisSet> out;
  AxisSet cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == s) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

struct E1Entry {
  AxisSet I;
  Integer exponent;          // log_|k| of |W_{S_q(I)}(k)|, from enumeration
  Integer formula_exponent;  // binom(n+q-1, n) * prod_{i in I} a_i
  AbelianGroup group;
};

/// Row t = 2q-1 of the reduced E_1 page; columns s = 0..n.
struct E1HatRow {
  std::uint64_t q = 1;
  std::vector<std::vector<E1Entry>> columns;

  /// log_|k| of the order of column s (exponents add over the direct sum).
  Integer column_exponent(std::size_t s) const {
    Integer r = 0;
    for (const auto& e : columns.at(s)) r += e.exponent;
    return r;
  }

  AbelianGroup column_group(std::size_t s) const {
    AbelianGroup g;
    for (const auto& e : columns.at(s)) g = g.direct_sum(e.group);
    return g;
  }
};

inline E1HatRow e1_hat(const ProblemSpec& spec, std::uint64_t q) {
  spec.validate();
  if (q < 1) throw DomainError("q must be >= 1");
  E1HatRow row{q, {}};
  for (std::size_t s = 0; s <= spec.n(); ++s) {
    std::vector<E1Entry> col;
    for (auto& I : subsets_of_size(spec.n(), s)) {
      auto S = sq_set(spec.a, q, I);
      E1Entry e{I, Integer(S.size()), cardinality_formula(spec.a, q, I), witt_group(S, spec.p, spec.f)};
      col.push_back(std::move(e));
    }
    row.columns.push_back(std::move(col));
  }
  return row;
}

/// Full E_1 page, Ê_1 ⊗ E(x_1..x_{n-1}), for rows t = 1..2*q_max.
struct E1Page {
  std::uint64_t q_max = 1;
  std::size_t n = 1;
  std::vector<E1HatRow> hat_rows;               // q = 1..q_max
  std::vector<std::vector<AbelianGroup>> cells;  // cells[t][s], t = 0..2*q_max

  const AbelianGroup& at(std::size_t s, std::size_t t) const { return cells.at(t).at(s); }
};

inline E1Page e1_full(const ProblemSpec& spec, std::uint64_t q_max) {
  spec.validate();
  if (q_max < 1) throw DomainError("q must be >= 1");
  E1Page page;
  page.q_max = q_max;
  page.n = spec.n();
  for (std::uint64_t q = 1; q <= q_max; ++q) page.hat_rows.push_back(e1_hat(spec, q));
  auto hat = [&](std::size_t s, std::int64_t t) -> AbelianGroup {
    if (t < 1 || t % 2 == 0) return {};
    const auto q = static_cast<std::uint64_t>((t + 1) / 2);
    return page.hat_rows.at(q - 1).column_group(s);
  };
  const std::size_t rows = 2 * q_max + 1;
  page.cells.assign(rows, std::vector<AbelianGroup>(spec.n() + 1));
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t s = 0; s <= spec.n(); ++s)
      for (std::size_t k = 0; k + 1 <= spec.n() && k <= t; ++k)
        page.cells[t][s] = page.cells[t][s].direct_sum(
            hat(s, static_cast<std::int64_t>(t - k)).power(binomial(spec.n() - 1, k)));
  return page;
}

inline void require_tame(const ProblemSpec& spec) {
  if (!spec.tame())
    throw HypothesisViolation("closed form needs p to divide none of the a_i (p = " + std::to_string(spec.p) + ")");
}

/// K̂_{2q-1}: ⊕ (Z/p^{m(s)})^f over s in S_q({1..n}) with p ∤ gcd(s) and a_i ∤ s_i for all i.
inline AbelianGroup khat_group(const ProblemSpec& spec, std::uint64_t q) {
  spec.validate();
  require_tame(spec);
  if (q < 1) throw DomainError("q must be >= 1");
  const auto S = sq_set(spec.a, q, spec.all_axes());
  AbelianGroup g;
  for (const auto& s : S.points()) {
    if (s.content() % spec.p == 0) continue;
    bool free = true;
    for (std::size_t i = 0; i < spec.n(); ++i) free = free && s[i] % spec.a[i] != 0;
    if (free) g.add_cyclic(spec.p, p_line(S, s, spec.p), spec.f);
  }
  return g;
}

/// binom(n+q-1, n) * prod (a_i - 1), the exponent of |k| in |K̂_{2q-1}|.
inline Integer khat_order_exponent(const ProblemSpec& spec, std::uint64_t q) {
  Integer r = binomial(spec.n() + q - 1, spec.n());
  for (auto ai : spec.a) r *= ai - 1;
  return r;
}

inline constexpr std::uint64_t kDefaultBruteBudget = 6561;  // 3^8

/// Oracle for khat_group: builds W_{S_q}(F_{p^f}) as a finite group under Witt addition,
/// forms the subgroup generated by the images of the Verschiebungen V^i_{a_i}, and reads off
/// the quotient's invariants from its order profile.
inline AbelianGroup khat_brute(const ProblemSpec& spec, std::uint64_t q, std::uint64_t budget = kDefaultBruteBudget) {
  spec.validate();
  require_tame(spec);
  if (q < 1) throw DomainError("q must be >= 1");
  auto S = std::make_shared<const TruncationSet>(sq_set(spec.a, q, spec.all_axes()));
  const Integer total = ipow(spec.field_size(), S->size());
  if (total > budget)
    throw BudgetExceeded("khat_brute: group has " + total.get_str() + " elements, budget is " + std::to_string(budget));

  auto field = std::make_shared<const FiniteField>(spec.p, spec.f);
  using Vec = WittVector<FiniteField>;
  const WittRing<FiniteField> G(field, S);
  const std::uint64_t k = field->size();
  const std::uint64_t order = total.get_ui();

  auto encode = [&](const Vec& x) {
    std::uint64_t idx = 0;
    const auto& c = x.components();
    for (std::size_t j = c.size(); j-- > 0;) idx = idx * k + field->index_of(c[j]);
    return idx;
  };
  auto decode_over = [&](const WittRing<FiniteField>& W, std::uint64_t idx) {
    std::vector<FiniteField::element_type> c(W.set().size());
    for (auto& v : c) {
      v = field->element_from_index(idx % k);
      idx /= k;
    }
    return W.make(std::move(c));
  };

  // Subgroup generated by the Verschiebung images.
  std::vector<char> in_h(order, 0);
  std::vector<Vec> members{G.zero()};
  in_h[0] = 1;
  auto absorb = [&](const Vec& g) {
    if (in_h[encode(g)]) return;
    const std::vector<Vec> base = members;
    Vec step = g;
    while (!in_h[encode(step)]) {
      for (const auto& h : base) {
        auto s = G.add(h, step);
        auto idx = encode(s);
        if (!in_h[idx]) {
          in_h[idx] = 1;
          members.push_back(std::move(s));
        }
      }
      step = G.add(step, g);
    }
  };

  std::mt19937_64 rng(0x5eed);
  for (std::size_t i = 0; i < spec.n(); ++i) {
    AxisSet others;
    for (std::size_t j = 0; j < spec.n(); ++j)
      if (j != i) others.push_back(j);
    auto Si = sq_set(spec.a, q, others);
    if (!(Si == quotient(*S, i, spec.a[i])))
      throw InternalVerificationFailure("khat_brute: S_q(I - i) differs from S_q(I)/a_i");
    const WittRing<FiniteField> Wi(field, std::make_shared<const TruncationSet>(std::move(Si)));
    const std::uint64_t src_order = ipow(Integer(k), Wi.set().size()).get_ui();

    // V^i_{a_i} must be additive before its image is used as a subgroup.
    auto check_pair = [&](std::uint64_t u, std::uint64_t v) {
      auto x = decode_over(Wi, u), y = decode_over(Wi, v);
      auto lhs = verschiebung(G, Wi.add(x, y), i, spec.a[i]);
      auto rhs = G.add(verschiebung(G, x, i, spec.a[i]), verschiebung(G, y, i, spec.a[i]));
      if (!(lhs == rhs)) throw InternalVerificationFailure("khat_brute: Verschiebung is not additive");
    };
    if (src_order * src_order <= 4096) {
      for (std::uint64_t u = 0; u < src_order; ++u)
        for (std::uint64_t v = 0; v < src_order; ++v) check_pair(u, v);
    } else {
      std::uniform_int_distribution<std::uint64_t> pick(0, src_order - 1);
      for (int t = 0; t < 256; ++t) check_pair(pick(rng), pick(rng));
    }

    for (std::uint64_t u = 0; u < src_order; ++u) absorb(verschiebung(G, decode_over(Wi, u), i, spec.a[i]));
  }

  // Cosets of H and the order profile of G/H.
  std::vector<char> covered(order, 0);
  std::vector<std::uint64_t> killed_by;  // killed_by[j] = #cosets c with p^j c = 0
  for (std::uint64_t idx = 0; idx < order; ++idx) {
    if (covered[idx]) continue;
    auto rep = decode_over(G, idx);
    for (const auto& h : members) covered[encode(G.add(rep, h))] = 1;
    std::size_t j = 0;
    for (auto cur = rep; !in_h[encode(cur)]; cur = G.scale(cur, Integer(spec.p))) ++j;
    if (killed_by.size() <= j) killed_by.resize(j + 1, 0);
    ++killed_by[j];
  }
  for (std::size_t j = 1; j < killed_by.size(); ++j) killed_by[j] += killed_by[j - 1];

  // Number of cyclic factors of order >= p^j is log_p(c_j / c_{j-1}).
  auto log_p = [&](std::uint64_t v) {
    std::uint64_t e = 0;
    while (v > 1) {
      if (v % spec.p != 0) throw InternalVerificationFailure("khat_brute: order profile is not a p-power");
      v /= spec.p;
      ++e;
    }
    return e;
  };
  std::vector<std::uint64_t> at_least;
  for (std::size_t j = 1; j < killed_by.size(); ++j) at_least.push_back(log_p(killed_by[j] / killed_by[j - 1]));
  at_least.push_back(0);
  AbelianGroup g;
  for (std::size_t j = 0; j + 1 < at_least.size(); ++j) {
    if (at_least[j] < at_least[j + 1]) throw InternalVerificationFailure("khat_brute: inconsistent order profile");
    g.add_cyclic(spec.p, j + 1, at_least[j] - at_least[j + 1]);
  }
  if (g.order() * members.size() != order) throw InternalVerificationFailure("khat_brute: |G/H| * |H| != |G|");
  return g;
}

/// K̃_m = ⊕_k (K̂_{m-k})^{binom(n-1, k)}, K̂ concentrated in odd positive degrees.
inline AbelianGroup ktilde_group(const ProblemSpec& spec, std::int64_t degree) {
  spec.validate();
  require_tame(spec);
  AbelianGroup g;
  for (std::size_t k = 0; k + 1 <= spec.n(); ++k) {
    const std::int64_t j = degree - static_cast<std::int64_t>(k);
    if (j < 1 || j % 2 == 0) continue;
    g = g.direct_sum(khat_group(spec, static_cast<std::uint64_t>((j + 1) / 2)).power(binomial(spec.n() - 1, k)));
  }
  return g;
}

struct TfResult {
  TruncationSet set;                     // S_q(I) ∩ <s>
  std::vector<std::uint64_t> multipliers;  // m | gcd(s) with m * primitive(s) in the set
  AbelianGroup group;
};

/// TF_{2q-1}(T ∧ X̂_I; s) ≅ W_{S_q(I) ∩ <s>}(F_{p^f}).
inline TfResult tf_group(const ProblemSpec& spec, const AxisSet& I, const Point& s, std::uint64_t q) {
  spec.validate();
  if (s.dim() != spec.n()) throw DimensionMismatch("tf: point dimension differs from n");
  const auto Sq = sq_set(spec.a, q, I);
  const Point only[] = {s};
  const auto generated = closure(only);
  std::vector<Point> pts;
  for (const auto& u : generated.points())
    if (Sq.contains(u)) pts.push_back(u);
  auto set = TruncationSet::from_sorted_unchecked(spec.n(), std::move(pts));
  std::vector<std::uint64_t> ms;
  const auto line = generated_intersect(Sq, s);
  for (const auto& pt : line.points()) ms.push_back(pt[0]);
  auto group = witt_group(set, spec.p, spec.f);
  return {std::move(set), std::move(ms), std::move(group)};
}

/// Degree-indexed form: only odd positive degrees 2q-1 are nonzero.
inline TfResult tf_group_in_degree(const ProblemSpec& spec, const AxisSet& I, const Point& s, std::int64_t degree) {
  if (degree < 1 || degree % 2 == 0) {
    spec.validate();
    return {TruncationSet::from_sorted_unchecked(spec.n(), {}), {}, {}};
  }
  return tf_group(spec, I, s, static_cast<std::uint64_t>((degree + 1) / 2));
}

}  // namespace wittn
