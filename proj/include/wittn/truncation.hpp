#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"

namespace wittn {

/// A point of N^n (all coordinates >= 1).
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<std::uint64_t> coords) : coords_(std::move(coords)) { validate(); }
  Point(std::initializer_list<std::uint64_t> coords) : coords_(coords) { validate(); }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::uint64_t operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<std::uint64_t>& coords() const noexcept { return coords_; }

  /// gcd of the coordinates.
  std::uint64_t content() const { return gcd_of(coords_); }
  bool is_primitive() const { return content() == 1; }

  Point primitive() const {
    auto g = content();
    std::vector<std::uint64_t> c(coords_);
    for (auto& x : c) x /= g;
    return Point(std::move(c));
  }

  Point scaled(std::uint64_t d) const {
    std::vector<std::uint64_t> c(coords_);
    for (auto& x : c) x *= d;
    return Point(std::move(c));
  }

  /// Same point with coordinate `axis` replaced by `value`.
  Point with(std::size_t axis, std::uint64_t value) const {
    std::vector<std::uint64_t> c(coords_);
    c.at(axis) = value;
    return Point(std::move(c));
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coords_[i]);
    }
    return s + ")";
  }

  friend auto operator<=>(const Point&, const Point&) = default;
  friend bool operator==(const Point&, const Point&) = default;

 private:
  void validate() const {
    if (coords_.empty()) throw ConstructionError("point must have dimension >= 1");
    for (auto c : coords_)
      if (c == 0) throw ConstructionError("point coordinates must be positive");
  }

  std::vector<std::uint64_t> coords_;
};

/// Returns d with d*u == s, if such a positive integer exists.
inline std::optional<std::uint64_t> divides(const Point& u, const Point& s) {
  if (u.dim() != s.dim()) throw DimensionMismatch("divides: points have different dimensions");
  if (s[0] % u[0] != 0) return std::nullopt;
  const std::uint64_t d = s[0] / u[0];
  for (std::size_t i = 1; i < u.dim(); ++i)
    if (u[i] * d != s[i]) return std::nullopt;
  return d;
}

/// Axis subset I of {0, ..., n-1}, kept sorted.
using AxisSet = std::vector<std::size_t>;

/// A finite division-closed subset of N^n, stored in lexicographic order.
class TruncationSet {
 public:
  TruncationSet() = default;

  /// Validates dimension and division closure.
  static TruncationSet from_points(std::size_t n, std::vector<Point> points) {
    if (n == 0) throw ConstructionError("truncation set dimension must be >= 1");
    for (const auto& p : points)
      if (p.dim() != n) throw DimensionMismatch("point " + p.str() + " does not have dimension " + std::to_string(n));
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    TruncationSet s(n, std::move(points));
    if (auto bad = s.first_closure_violation())
      throw ConstructionError("not division-closed: " + bad->str() + " has a divisor outside the set");
    return s;
  }

  /// One-dimensional set {d_1, d_2, ...}.
  static TruncationSet from_integers(std::span<const std::uint64_t> values) {
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (auto v : values) pts.push_back(Point{v});
    return from_points(1, std::move(pts));
  }
  static TruncationSet from_integers(std::initializer_list<std::uint64_t> values) {
    return from_integers(std::span<const std::uint64_t>(values.begin(), values.size()));
  }

  std::size_t dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Point>& points() const noexcept { return points_; }

  std::optional<std::size_t> index_of(const Point& p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
  }
  bool contains(const Point& p) const { return p.dim() == n_ && index_of(p).has_value(); }

  bool is_subset_of(const TruncationSet& other) const {
    if (other.n_ != n_) return false;
    return std::includes(other.points_.begin(), other.points_.end(), points_.begin(), points_.end());
  }

  /// Point whose divisor set is not contained in the set, if any.
  std::optional<Point> first_closure_violation() const {
    for (const auto& s : points_) {
      for (auto l : prime_factors(s.content())) {
        std::vector<std::uint64_t> c(s.coords());
        for (auto& x : c) x /= l;
        if (!index_of(Point(std::move(c)))) return s;
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const TruncationSet&, const TruncationSet&) = default;

  /// Trusted constructor: points must already be sorted, unique and division-closed.
  static TruncationSet from_sorted_unchecked(std::size_t n, std::vector<Point> points) {
    return TruncationSet(n, std::move(points));
  }

 private:
  TruncationSet(std::size_t n, std::vector<Point> points) : n_(n), points_(std::move(points)) {}

  std::size_t n_ = 0;
  std::vector<Point> points_;
};

/// Smallest truncation set containing the generators.
inline TruncationSet closure(std::span<const Point> generators) {
  if (generators.empty()) throw ConstructionError("closure: need at least one generator");
  const std::size_t n = generators.front().dim();
  std::vector<Point> pts;
  for (const auto& g : generators) {
    if (g.dim() != n) throw DimensionMismatch("closure: generators have different dimensions");
    const Point prim = g.primitive();
    for (auto d : divisors(g.content())) pts.push_back(prim.scaled(d));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return TruncationSet::from_sorted_unchecked(n, std::move(pts));
}

inline TruncationSet closure(std::initializer_list<Point> generators) {
  return closure(std::span<const Point>(generators.begin(), generators.size()));
}

namespace detail {

inline void check_axes(std::size_t n, const AxisSet& axes) {
  for (auto i : axes)
    if (i >= n) throw DomainError("axis index " + std::to_string(i) + " out of range for n = " + std::to_string(n));
}

inline std::vector<std::uint64_t> sq_scales(std::span<const std::uint64_t> a, const AxisSet& I) {
  std::vector<std::uint64_t> c(a.size(), 1);
  for (auto i : I) c[i] = a[i];
  return c;
}

}  // namespace detail

/// S_q(I) = { s : sum_i floor((s_i - 1) / a_i^{[i in I]}) <= q - 1 }.
inline TruncationSet sq_set(std::span<const std::uint64_t> a, std::uint64_t q, const AxisSet& I) {
  const std::size_t n = a.size();
  if (n == 0) throw ConstructionError("sq_set: need n >= 1");
  if (q < 1) throw DomainError("sq_set: q must be >= 1");
  for (auto ai : a)
    if (ai < 1) throw DomainError("sq_set: exponents must be >= 1");
  detail::check_axes(n, I);
  const auto scale = detail::sq_scales(a, I);
  std::vector<Point> pts;
  std::vector<std::uint64_t> cur(n);
  // Axis 0 outermost with increasing coordinates, so output is already lexicographic.
  auto rec = [&](auto&& self, std::size_t axis, std::uint64_t budget) -> void {
    if (axis == n) {
      pts.emplace_back(cur);
      return;
    }
    const std::uint64_t top = scale[axis] * (budget + 1);
    for (std::uint64_t s = 1; s <= top; ++s) {
      cur[axis] = s;
      self(self, axis + 1, budget - (s - 1) / scale[axis]);
    }
  };
  rec(rec, 0, q - 1);
  return TruncationSet::from_sorted_unchecked(n, std::move(pts));
}

/// binom(n + q - 1, n) * prod_{i in I} a_i.
inline Integer cardinality_formula(std::span<const std::uint64_t> a, std::uint64_t q, const AxisSet& I) {
  detail::check_axes(a.size(), I);
  if (q < 1) throw DomainError("cardinality_formula: q must be >= 1");
  Integer r = binomial(a.size() + q - 1, a.size());
  for (auto i : I) r *= a[i];
  return r;
}

/// One orbit line N*s ∩ S through a primitive point s.
struct OrbitLine {
  Point primitive;
  std::vector<std::uint64_t> multipliers;  // sorted; divisor-closed
  std::vector<std::size_t> indices;        // position of multipliers[k]*primitive in the set
};

/// Lines keyed by primitive vector, sorted lexicographically by that vector.
using OrbitDecomposition = std::vector<OrbitLine>;

inline OrbitDecomposition decompose(const TruncationSet& S) {
  std::map<Point, OrbitLine> lines;
  for (std::size_t idx = 0; idx < S.size(); ++idx) {
    const Point& s = S.points()[idx];
    const auto g = s.content();
    Point prim = s.primitive();
    auto& line = lines[prim];
    line.primitive = prim;
    line.multipliers.push_back(g);
    line.indices.push_back(idx);
  }
  OrbitDecomposition out;
  out.reserve(lines.size());
  for (auto& [key, line] : lines) {
    std::vector<std::size_t> order(line.multipliers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return line.multipliers[x] < line.multipliers[y]; });
    OrbitLine sorted{line.primitive, {}, {}};
    for (auto k : order) {
      sorted.multipliers.push_back(line.multipliers[k]);
      sorted.indices.push_back(line.indices[k]);
    }
    out.push_back(std::move(sorted));
  }
  return out;
}

/// S / (1, ..., r, ..., 1) = { t : (t_1, ..., r t_i, ..., t_n) in S }.
inline TruncationSet quotient(const TruncationSet& S, std::size_t axis, std::uint64_t r) {
  if (axis >= S.dim()) throw DomainError("quotient: axis out of range");
  if (r < 1) throw DomainError("quotient: r must be >= 1");
  std::vector<Point> pts;
  for (const auto& s : S.points())
    if (s[axis] % r == 0) pts.push_back(s.with(axis, s[axis] / r));
  std::sort(pts.begin(), pts.end());
  return TruncationSet::from_sorted_unchecked(S.dim(), std::move(pts));
}

/// { d : d*s in S } as a one-dimensional truncation set.
inline TruncationSet line_intersect(const TruncationSet& S, const Point& s) {
  if (s.dim() != S.dim()) throw DimensionMismatch("line_intersect: dimension mismatch");
  std::vector<Point> ds;
  for (const auto& t : S.points())
    if (auto d = divides(s, t)) ds.push_back(Point{*d});
  std::sort(ds.begin(), ds.end());
  return TruncationSet::from_sorted_unchecked(1, std::move(ds));
}

/// <s> ∩ S, reported as { m | gcd(s) : m * primitive(s) in S } (a one-dimensional truncation set).
inline TruncationSet generated_intersect(const TruncationSet& S, const Point& s) {
  if (s.dim() != S.dim()) throw DimensionMismatch("generated_intersect: dimension mismatch");
  const Point prim = s.primitive();
  std::vector<Point> ms;
  for (auto m : divisors(s.content()))
    if (S.contains(prim.scaled(m))) ms.push_back(Point{m});
  return TruncationSet::from_sorted_unchecked(1, std::move(ms));
}

/// Length of the p-typical set { p^j : p^j s in S }.
inline std::uint64_t p_line(const TruncationSet& S, const Point& s, std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("p_line: p must be prime");
  if (s.dim() != S.dim()) throw DimensionMismatch("p_line: dimension mismatch");
  std::uint64_t len = 0;
  Point cur = s;
  while (S.contains(cur)) {
    ++len;
    cur = cur.scaled(p);
  }
  return len;
}

}  // namespace wittn
