#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"
#include "wittn/rings.hpp"
#include "wittn/truncation.hpp"
#include "wittn/universal.hpp"

namespace wittn {

/// Element of W_S(R): one coefficient per point of S, stored densely in the set's order.
template <CommutativeRing R>
class WittVector {
 public:
  using element_type = typename R::element_type;

  WittVector(std::shared_ptr<const R> ring, std::shared_ptr<const TruncationSet> set, std::vector<element_type> comps)
      : ring_(std::move(ring)), set_(std::move(set)), comps_(std::move(comps)) {
    if (comps_.size() != set_->size()) throw DimensionMismatch("witt vector: component count differs from set size");
  }

  const R& ring() const noexcept { return *ring_; }
  const std::shared_ptr<const R>& ring_ptr() const noexcept { return ring_; }
  const TruncationSet& set() const noexcept { return *set_; }
  const std::shared_ptr<const TruncationSet>& set_ptr() const noexcept { return set_; }
  const std::vector<element_type>& components() const noexcept { return comps_; }

  /// Coefficient at a point of the set.
  const element_type& at(const Point& p) const {
    auto idx = set_->index_of(p);
    if (!idx) throw DomainError("point " + p.str() + " is not in the truncation set");
    return comps_[*idx];
  }

  friend bool operator==(const WittVector& a, const WittVector& b) {
    return (a.set_ == b.set_ || *a.set_ == *b.set_) && a.comps_ == b.comps_;
  }

 private:
  std::shared_ptr<const R> ring_;
  std::shared_ptr<const TruncationSet> set_;
  std::vector<element_type> comps_;
};

/// An integer polynomial with coefficients embedded in R and variables bound to value slots.
template <CommutativeRing R>
class CompiledPolynomial {
 public:
  using element_type = typename R::element_type;

  CompiledPolynomial(const R& ring, const IntPoly& poly, std::span<const std::size_t> slots, std::size_t nslots)
      : max_exp_(nslots, 0) {
    for (const auto& [e, c] : poly.terms()) {
      auto coeff = ring.from_integer(c);
      if (ring.is_zero(coeff)) continue;
      Term t{std::move(coeff), {}};
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        t.factors.emplace_back(static_cast<std::uint32_t>(slots[v]), e[v]);
        max_exp_[slots[v]] = std::max(max_exp_[slots[v]], e[v]);
      }
      terms_.push_back(std::move(t));
    }
  }

  element_type evaluate(const R& ring, std::span<const element_type> values) const {
    std::vector<std::vector<element_type>> powers(max_exp_.size());
    for (std::size_t v = 0; v < max_exp_.size(); ++v) {
      if (max_exp_[v] == 0) continue;
      powers[v].reserve(max_exp_[v]);
      powers[v].push_back(values[v]);
      for (std::uint16_t k = 1; k < max_exp_[v]; ++k) powers[v].push_back(ring.mul(powers[v].back(), values[v]));
    }
    auto acc = ring.zero();
    for (const auto& t : terms_) {
      auto m = t.coeff;
      for (const auto& [v, k] : t.factors) m = ring.mul(m, powers[v][k - 1]);
      acc = ring.add(acc, m);
    }
    return acc;
  }

 private:
  struct Term {
    element_type coeff;
    std::vector<std::pair<std::uint32_t, std::uint16_t>> factors;
  };
  std::vector<Term> terms_;
  std::vector<std::uint16_t> max_exp_;
};

/// A universal polynomial table compiled against one line shape (multiplier set) and ring.
template <CommutativeRing R>
struct CompiledLineOp {
  using element_type = typename R::element_type;

  std::vector<std::uint64_t> outputs;
  std::vector<CompiledPolynomial<R>> polys;

  CompiledLineOp(const R& ring, const std::vector<std::uint64_t>& multipliers, WittOp op) {
    auto table = universal_polys(multipliers, op);
    outputs = table->outputs;
    const std::size_t width = op.binary() ? 2 * multipliers.size() : multipliers.size();
    for (const auto& up : table->polys) {
      std::vector<std::size_t> slots(up->nvars());
      const std::size_t k = up->support.size();
      for (std::size_t j = 0; j < k; ++j) {
        auto it = std::lower_bound(multipliers.begin(), multipliers.end(), up->support[j]);
        const auto pos = static_cast<std::size_t>(it - multipliers.begin());
        slots[j] = pos;
        if (op.binary()) slots[k + j] = multipliers.size() + pos;
      }
      polys.emplace_back(ring, up->poly, slots, width);
    }
  }

  std::vector<element_type> apply(const R& ring, std::span<const element_type> values) const {
    std::vector<element_type> out;
    out.reserve(polys.size());
    for (const auto& p : polys) out.push_back(p.evaluate(ring, values));
    return out;
  }
};

/// W_S(R) for a finite truncation set S in N^n.
///
/// Ring operations are evaluated line by line: S splits into lines N*s ∩ S through
/// primitive s, and each line carries the classical Witt structure of its multiplier set.
template <CommutativeRing R>
class WittRing {
 public:
  using base_ring = R;
  using base_element = typename R::element_type;
  using element_type = WittVector<R>;

  WittRing(R ring, TruncationSet set)
      : WittRing(std::make_shared<const R>(std::move(ring)), std::make_shared<const TruncationSet>(std::move(set))) {}

  WittRing(std::shared_ptr<const R> ring, std::shared_ptr<const TruncationSet> set)
      : ring_(std::move(ring)), set_(std::move(set)), lines_(decompose(*set_)), cache_(std::make_shared<Cache>()) {}

  const R& base() const noexcept { return *ring_; }
  const std::shared_ptr<const R>& base_ptr() const noexcept { return ring_; }
  const TruncationSet& set() const noexcept { return *set_; }
  const std::shared_ptr<const TruncationSet>& set_ptr() const noexcept { return set_; }
  const OrbitDecomposition& lines() const noexcept { return lines_; }

  element_type make(std::vector<base_element> comps) const { return element_type(ring_, set_, std::move(comps)); }

  /// Vector from sparse components; absent points are zero.
  element_type from_map(const std::map<Point, base_element>& comps) const {
    std::vector<base_element> v(set_->size(), ring_->zero());
    for (const auto& [p, c] : comps) {
      auto idx = set_->index_of(p);
      if (!idx) throw DomainError("point " + p.str() + " is not in the truncation set");
      v[*idx] = c;
    }
    return make(std::move(v));
  }

  element_type zero() const { return make(std::vector<base_element>(set_->size(), ring_->zero())); }

  /// 1 at every primitive point, 0 elsewhere.
  element_type one() const {
    std::vector<base_element> v(set_->size(), ring_->zero());
    for (const auto& line : lines_)
      if (line.multipliers.front() == 1) v[line.indices.front()] = ring_->one();
    return make(std::move(v));
  }

  element_type add(const element_type& x, const element_type& y) const {
    return binary(x, y, WittOp::sum());
  }
  element_type mul(const element_type& x, const element_type& y) const {
    return binary(x, y, WittOp::product());
  }
  element_type neg(const element_type& x) const {
    check(x);
    std::vector<base_element> out(set_->size(), ring_->zero());
    for (const auto& line : lines_) {
      auto vals = gather(x, line);
      auto res = compiled(line.multipliers, WittOp::negation())->apply(*ring_, vals);
      for (std::size_t k = 0; k < res.size(); ++k) out[line.indices[k]] = std::move(res[k]);
    }
    return make(std::move(out));
  }
  element_type sub(const element_type& x, const element_type& y) const { return add(x, neg(y)); }

  bool is_zero(const element_type& x) const {
    check(x);
    return std::all_of(x.components().begin(), x.components().end(),
                       [&](const base_element& c) { return ring_->is_zero(c); });
  }

  /// n * x by double-and-add (n may be negative).
  element_type scale(const element_type& x, Integer n) const {
    element_type acc = zero();
    element_type base = n < 0 ? neg(x) : x;
    if (n < 0) n = -n;
    while (n > 0) {
      if (mpz_odd_p(n.get_mpz_t())) acc = add(acc, base);
      n >>= 1;
      if (n > 0) base = add(base, base);
    }
    return acc;
  }

  element_type from_integer(const Integer& n) const { return scale(one(), n); }

  /// w_s = sum over d*u = s of gcd(u) * x_u^d, aligned with the set's points.
  std::vector<base_element> ghost(const element_type& x) const {
    check(x);
    std::vector<base_element> w(set_->size(), ring_->zero());
    for (const auto& line : lines_) {
      const auto& T = line.multipliers;
      for (std::size_t k = 0; k < T.size(); ++k) {
        auto acc = ring_->zero();
        for (std::size_t j = 0; j <= k; ++j) {
          if (T[k] % T[j] != 0) continue;
          auto term = ring_pow(*ring_, x.components()[line.indices[j]], T[k] / T[j]);
          acc = ring_->add(acc, ring_scale(*ring_, term, Integer(T[j])));
        }
        w[line.indices[k]] = std::move(acc);
      }
    }
    return w;
  }

  /// Unique x with ghost(x) = w; throws NonIntegralDivision when w is not a ghost image.
  element_type from_ghost(std::span<const base_element> w) const
    requires ExactDivisionRing<R>
  {
    if (w.size() != set_->size()) throw DimensionMismatch("from_ghost: wrong number of ghost components");
    std::vector<base_element> x(set_->size(), ring_->zero());
    for (const auto& line : lines_) {
      const auto& T = line.multipliers;
      for (std::size_t k = 0; k < T.size(); ++k) {
        auto acc = w[line.indices[k]];
        for (std::size_t j = 0; j < k; ++j) {
          if (T[k] % T[j] != 0) continue;
          auto term = ring_pow(*ring_, x[line.indices[j]], T[k] / T[j]);
          acc = ring_->sub(acc, ring_scale(*ring_, term, Integer(T[j])));
        }
        x[line.indices[k]] = ring_->div_exact(acc, Integer(T[k]));
      }
    }
    return make(std::move(x));
  }

  /// Classical F_e on one line: values indexed by `multipliers`, result indexed by multipliers/e.
  std::pair<std::vector<std::uint64_t>, std::vector<base_element>> line_frobenius(
      const std::vector<std::uint64_t>& multipliers, std::span<const base_element> values, std::uint64_t e) const {
    if (e == 1) return {multipliers, std::vector<base_element>(values.begin(), values.end())};
    auto op = compiled(multipliers, WittOp::frobenius(e));
    return {op->outputs, op->apply(*ring_, values)};
  }

  /// Precompiled classical line operation; shared between lines with equal multiplier sets.
  std::shared_ptr<const CompiledLineOp<R>> compiled(const std::vector<std::uint64_t>& multipliers, WittOp op) const {
    std::lock_guard lock(cache_->mutex);
    auto key = std::make_pair(multipliers, op);
    auto it = cache_->ops.find(key);
    if (it != cache_->ops.end()) return it->second;
    auto made = std::make_shared<const CompiledLineOp<R>>(*ring_, multipliers, op);
    cache_->ops.emplace(std::move(key), made);
    return made;
  }

  void check(const element_type& x) const {
    if (x.set_ptr() != set_ && x.set() != *set_) throw SetMismatch("witt vector lives over a different truncation set");
    if (x.ring_ptr() != ring_ && !(x.ring().descriptor() == ring_->descriptor()))
      throw SetMismatch("witt vector lives over a different coefficient ring");
  }

  std::vector<base_element> gather(const element_type& x, const OrbitLine& line) const {
    std::vector<base_element> v;
    v.reserve(line.indices.size());
    for (auto idx : line.indices) v.push_back(x.components()[idx]);
    return v;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::vector<std::uint64_t>, WittOp>, std::shared_ptr<const CompiledLineOp<R>>> ops;
  };

  element_type binary(const element_type& x, const element_type& y, WittOp op) const {
    check(x);
    check(y);
    std::vector<base_element> out(set_->size(), ring_->zero());
    std::vector<base_element> vals;
    for (const auto& line : lines_) {
      vals.clear();
      for (auto idx : line.indices) vals.push_back(x.components()[idx]);
      for (auto idx : line.indices) vals.push_back(y.components()[idx]);
      auto res = compiled(line.multipliers, op)->apply(*ring_, vals);
      for (std::size_t k = 0; k < res.size(); ++k) out[line.indices[k]] = std::move(res[k]);
    }
    return make(std::move(out));
  }

  std::shared_ptr<const R> ring_;
  std::shared_ptr<const TruncationSet> set_;
  OrbitDecomposition lines_;
  std::shared_ptr<Cache> cache_;
};

/// Projection to a division-closed subset; a ring homomorphism.
template <CommutativeRing R>
WittVector<R> restrict(const WittVector<R>& x, std::shared_ptr<const TruncationSet> sub) {
  if (!sub->is_subset_of(x.set())) throw DomainError("restrict: target set is not a subset");
  if (auto bad = sub->first_closure_violation()) throw DomainError("restrict: target set is not division-closed");
  std::vector<typename R::element_type> v;
  v.reserve(sub->size());
  for (const auto& p : sub->points()) v.push_back(x.at(p));
  return WittVector<R>(x.ring_ptr(), std::move(sub), std::move(v));
}

/// V^i_r : W_{S/(1,..,r,..,1)} -> W_S, pure reindexing with zero fill.
template <CommutativeRing R>
WittVector<R> verschiebung(const WittRing<R>& target, const WittVector<R>& x, std::size_t axis, std::uint64_t r) {
  const auto& S = target.set();
  if (!(x.set() == quotient(S, axis, r)))
    throw SetMismatch("verschiebung: source vector must live over the quotient set");
  std::vector<typename R::element_type> out(S.size(), target.base().zero());
  for (std::size_t idx = 0; idx < S.size(); ++idx) {
    const Point& t = S.points()[idx];
    if (t[axis] % r != 0) continue;
    out[idx] = x.at(t.with(axis, t[axis] / r));
  }
  return target.make(std::move(out));
}

/// F^i_r : W_S -> W_{S/(1,..,r,..,1)}.
///
/// On the line through primitive s this is the classical F_e with e = r / gcd(s_i, r);
/// the image line has primitive vector e*s with coordinate i replaced by s_i / gcd(s_i, r).
template <CommutativeRing R>
WittVector<R> frobenius(const WittRing<R>& source, const WittVector<R>& x, std::size_t axis, std::uint64_t r) {
  source.check(x);
  if (r < 1) throw DomainError("frobenius: r must be >= 1");
  auto target_set = std::make_shared<const TruncationSet>(quotient(source.set(), axis, r));
  std::vector<typename R::element_type> out(target_set->size(), source.base().zero());
  for (const auto& line : source.lines()) {
    const auto si = line.primitive[axis];
    const auto di = std::gcd(si, r);
    const auto e = r / di;
    Point image = line.primitive.scaled(e).with(axis, si / di);
    auto values = source.gather(x, line);
    auto [outputs, res] = source.line_frobenius(line.multipliers, values, e);
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      auto idx = target_set->index_of(image.scaled(outputs[k]));
      if (!idx) throw InternalVerificationFailure("frobenius: image point missing from quotient set");
      out[*idx] = std::move(res[k]);
    }
  }
  return WittVector<R>(source.base_ptr(), std::move(target_set), std::move(out));
}

/// One factor of the p-typical decomposition: line through `primitive`, index e with p ∤ e.
template <CommutativeRing R>
struct PTypicalFactor {
  Point primitive;
  std::uint64_t e = 1;
  WittVector<R> vector;  // over the one-dimensional set {1, p, ..., p^(m-1)}
};

template <CommutativeRing R>
struct PTypicalSplit {
  std::uint64_t p = 0;
  std::vector<PTypicalFactor<R>> factors;  // ordered by (primitive, e)
};

/// {1, p, ..., p^(m-1)} as a one-dimensional truncation set.
inline std::shared_ptr<const TruncationSet> p_typical_set(std::uint64_t p, std::uint64_t m) {
  std::vector<Point> pts;
  std::uint64_t v = 1;
  for (std::uint64_t j = 0; j < m; ++j, v *= p) pts.push_back(Point{v});
  return std::make_shared<const TruncationSet>(TruncationSet::from_sorted_unchecked(1, std::move(pts)));
}

namespace detail {

inline std::uint64_t prime_to_p_part(std::uint64_t n, std::uint64_t p) {
  while (n % p == 0) n /= p;
  return n;
}

template <CommutativeRing R>
void check_local(const R& ring, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("p-typical split: p must be prime");
  if constexpr (LocalizableRing<R>) {
    if (ring.is_local_at(p)) return;
  }
  throw NotLocalAlgebra("p-typical split: coefficient ring is not a Z_(" + std::to_string(p) + ")-algebra");
}

}  // namespace detail

/// W_S(R) ≅ ∏ W_{p-line}(R; p) over lines and indices e prime to p; the e-th
/// component of a line is the restriction of F_e to the p-powers.
template <CommutativeRing R>
PTypicalSplit<R> p_typical_split(const WittRing<R>& W, const WittVector<R>& x, std::uint64_t p) {
  detail::check_local(W.base(), p);
  W.check(x);
  PTypicalSplit<R> out{p, {}};
  for (const auto& line : W.lines()) {
    const auto values = W.gather(x, line);
    for (auto e : line.multipliers) {
      if (e % p == 0) continue;
      auto [outputs, res] = W.line_frobenius(line.multipliers, values, e);
      std::vector<typename R::element_type> comps;
      for (std::uint64_t pj = 1;; pj *= p) {
        auto it = std::lower_bound(outputs.begin(), outputs.end(), pj);
        if (it == outputs.end() || *it != pj) break;
        comps.push_back(res[static_cast<std::size_t>(it - outputs.begin())]);
      }
      auto set = p_typical_set(p, comps.size());
      out.factors.push_back({line.primitive, e, WittVector<R>(W.base_ptr(), std::move(set), std::move(comps))});
    }
  }
  return out;
}

/// Inverse of p_typical_split.
///
/// (F_e x)_{p^j} = e * x_{e p^j} + (terms in lower coordinates), so coordinates are
/// recovered in increasing order using the inverse of e in R.
template <CommutativeRing R>
WittVector<R> p_typical_assemble(const WittRing<R>& W, const PTypicalSplit<R>& split) {
  detail::check_local(W.base(), split.p);
  const std::uint64_t p = split.p;
  const R& ring = W.base();
  std::map<std::pair<Point, std::uint64_t>, const PTypicalFactor<R>*> by_key;
  for (const auto& f : split.factors) by_key[{f.primitive, f.e}] = &f;

  std::vector<typename R::element_type> x(W.set().size(), ring.zero());
  std::map<std::pair<Point, std::uint64_t>, std::size_t> lengths;
  for (const auto& line : W.lines()) {
    const auto& T = line.multipliers;
    std::vector<typename R::element_type> values(T.size(), ring.zero());
    for (std::size_t k = 0; k < T.size(); ++k) {
      const auto n = T[k];
      const auto e = detail::prime_to_p_part(n, p);
      std::uint64_t j = 0;
      for (auto m = n / e; m > 1; m /= p) ++j;
      auto it = by_key.find({line.primitive, e});
      if (it == by_key.end()) throw DomainError("p-typical assemble: missing factor for " + line.primitive.str());
      const auto& comps = it->second->vector.components();
      if (j >= comps.size()) throw DomainError("p-typical assemble: factor too short for " + line.primitive.str());
      ++lengths[{line.primitive, e}];
      if (e == 1) {
        values[k] = comps[j];
        continue;
      }
      auto op = W.compiled(T, WittOp::frobenius(e));
      auto pos = static_cast<std::size_t>(std::lower_bound(op->outputs.begin(), op->outputs.end(), n / e) -
                                          op->outputs.begin());
      // values[k] is still zero here, so this evaluates the lower-order part.
      auto rest = op->polys[pos].evaluate(ring, values);
      values[k] = ring.mul(ring.sub(comps[j], rest), ring.unit_inverse(Integer(e)));
    }
    for (std::size_t k = 0; k < T.size(); ++k) x[line.indices[k]] = std::move(values[k]);
  }
  if (lengths.size() != by_key.size() || by_key.size() != split.factors.size())
    throw DomainError("p-typical assemble: factors do not match the lines of the set");
  for (const auto& [key, f] : by_key)
    if (f->vector.components().size() != lengths[key])
      throw DomainError("p-typical assemble: factor length mismatch for " + key.first.str());
  return W.make(std::move(x));
}

/// Componentwise ring operations on a split (the product ring).
template <CommutativeRing R, class Op>
PTypicalSplit<R> split_combine(const PTypicalSplit<R>& a, const PTypicalSplit<R>& b, Op&& op) {
  if (a.factors.size() != b.factors.size() || a.p != b.p) throw SetMismatch("split_combine: shapes differ");
  PTypicalSplit<R> out{a.p, {}};
  for (std::size_t k = 0; k < a.factors.size(); ++k) {
    const auto& fa = a.factors[k];
    const auto& fb = b.factors[k];
    if (fa.primitive != fb.primitive || fa.e != fb.e) throw SetMismatch("split_combine: factor keys differ");
    WittRing<R> Wk(fa.vector.ring_ptr(), fa.vector.set_ptr());
    out.factors.push_back({fa.primitive, fa.e, op(Wk, fa.vector, fb.vector)});
  }
  return out;
}

template <CommutativeRing R>
bool operator==(const PTypicalSplit<R>& a, const PTypicalSplit<R>& b) {
  if (a.p != b.p || a.factors.size() != b.factors.size()) return false;
  for (std::size_t k = 0; k < a.factors.size(); ++k) {
    const auto& fa = a.factors[k];
    const auto& fb = b.factors[k];
    if (fa.primitive != fb.primitive || fa.e != fb.e || !(fa.vector == fb.vector)) return false;
  }
  return true;
}

}  // namespace wittn
