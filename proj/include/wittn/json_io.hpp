#pragma once

#include <nlohmann/json.hpp>

#include <memory>
#include <string>
#include <vector>

#include "wittn/abelian_group.hpp"
#include "wittn/error.hpp"
#include "wittn/ktheory.hpp"
#include "wittn/lattice.hpp"
#include "wittn/rings.hpp"
#include "wittn/truncation.hpp"
#include "wittn/witt.hpp"
#include "wittn/zrank.hpp"

namespace wittn {

using json = nlohmann::json;

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
inline json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                                          : Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw DomainError("expected an integer, got " + j.dump());
}

namespace detail {

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing JSON field \"") + key + "\"");
  return j.at(key);
}

inline std::uint64_t to_u64(const json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw DomainError("expected a non-negative integer, got " + j.dump());
  return j.get<std::uint64_t>();
}

inline const char* kind_name(RingKind k) {
  switch (k) {
    case RingKind::Integers: return "integers";
    case RingKind::Rationals: return "rationals";
    case RingKind::IntegersMod: return "integers_mod";
    case RingKind::FiniteField: return "finite_field";
    case RingKind::Polynomial: return "polynomial";
  }
  return "?";
}

inline RingKind kind_from_name(const std::string& s) {
  for (auto k : {RingKind::Integers, RingKind::Rationals, RingKind::IntegersMod, RingKind::FiniteField, RingKind::Polynomial})
    if (s == kind_name(k)) return k;
  throw DomainError("unknown ring kind \"" + s + "\"");
}

}  // namespace detail

inline json ring_to_json(const RingDescriptor& d) {
  json j{{"kind", detail::kind_name(d.kind)}};
  switch (d.kind) {
    case RingKind::IntegersMod:
      j["m"] = integer_to_json(d.m);
      break;
    case RingKind::FiniteField:
      j["p"] = d.p;
      j["f"] = d.f;
      j["modulus"] = d.modulus;
      break;
    case RingKind::Polynomial:
      j["base"] = json{{"kind", detail::kind_name(d.base)}};
      j["variables"] = d.variables;
      break;
    default:
      break;
  }
  return j;
}

inline RingDescriptor ring_from_json(const json& j) {
  const auto kind = detail::kind_from_name(detail::require(j, "kind").get<std::string>());
  switch (kind) {
    case RingKind::Integers: return RingDescriptor::integers();
    case RingKind::Rationals: return RingDescriptor::rationals();
    case RingKind::IntegersMod: return RingDescriptor::integers_mod(integer_from_json(detail::require(j, "m")));
    case RingKind::FiniteField: {
      std::vector<std::uint64_t> modulus;
      if (j.contains("modulus"))
        for (const auto& c : j.at("modulus")) modulus.push_back(detail::to_u64(c));
      return RingDescriptor::finite_field(detail::to_u64(detail::require(j, "p")), detail::to_u64(detail::require(j, "f")),
                                          std::move(modulus));
    }
    case RingKind::Polynomial: {
      const auto base = ring_from_json(detail::require(j, "base"));
      return RingDescriptor::polynomial(base.kind, detail::require(j, "variables").get<std::vector<std::string>>());
    }
  }
  throw DomainError("unknown ring kind");
}

inline json point_to_json(const Point& p) { return p.coords(); }

inline Point point_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("expected a point as a JSON array, got " + j.dump());
  std::vector<std::uint64_t> c;
  for (const auto& v : j) c.push_back(detail::to_u64(v));
  if (c.empty()) throw DomainError("empty point");
  for (auto v : c)
    if (v == 0) throw DomainError("point coordinates must be positive");
  return Point(std::move(c));
}

inline json set_to_json(const TruncationSet& S) {
  json pts = json::array();
  for (const auto& p : S.points()) pts.push_back(point_to_json(p));
  return {{"n", S.dim()}, {"points", std::move(pts)}};
}

inline TruncationSet set_from_json(const json& j) {
  const auto n = detail::to_u64(detail::require(j, "n"));
  std::vector<Point> pts;
  for (const auto& p : detail::require(j, "points")) pts.push_back(point_from_json(p));
  return TruncationSet::from_points(n, std::move(pts));
}

/// Sparse form: only nonzero components are listed.
template <CommutativeRing R>
json witt_to_json(const WittVector<R>& x) {
  json comps = json::array();
  const auto& pts = x.set().points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!x.ring().is_zero(x.components()[i]))
      comps.push_back(json::array({point_to_json(pts[i]), x.ring().format(x.components()[i])}));
  return {{"set", set_to_json(x.set())}, {"ring", ring_to_json(x.ring().descriptor())}, {"components", std::move(comps)}};
}

/// Components for `W` read from a JSON vector; the vector's set must equal W's set.
template <CommutativeRing R>
WittVector<R> witt_from_json(const WittRing<R>& W, const json& j) {
  const auto S = set_from_json(detail::require(j, "set"));
  if (!(S == W.set())) throw SetMismatch("Witt vector JSON is over a different truncation set");
  std::vector<typename R::element_type> c(S.size(), W.base().zero());
  std::vector<char> seen(S.size(), 0);
  for (const auto& entry : detail::require(j, "components")) {
    if (!entry.is_array() || entry.size() != 2) throw DomainError("component entries must be [point, value]");
    const auto pt = point_from_json(entry[0]);
    const auto idx = S.index_of(pt);
    if (!idx) throw SetMismatch("component at " + pt.str() + " lies outside the truncation set");
    if (seen[*idx]) throw DomainError("duplicate component at " + pt.str());
    seen[*idx] = 1;
    const auto& v = entry[1];
    c[*idx] = W.base().parse(v.is_string() ? v.get<std::string>() : v.dump());
  }
  return W.make(std::move(c));
}

inline json group_to_json(const AbelianGroup& g) {
  json f = json::array();
  for (const auto& q : g.factors()) f.push_back(integer_to_json(q));
  return {{"factors", std::move(f)}};
}

inline AbelianGroup group_from_json(const json& j) {
  std::vector<Integer> f;
  for (const auto& q : detail::require(j, "factors")) f.push_back(integer_from_json(q));
  return AbelianGroup::from_factors(std::move(f));
}

inline json spec_to_json(const ProblemSpec& s) { return {{"p", s.p}, {"f", s.f}, {"a", s.a}}; }

inline json series_to_json(const PoincareSeries& s) {
  json rows = json::array();
  for (std::uint64_t d = 1; d <= s.cutoff; ++d) rows.push_back({{"degree", d}, {"coefficient", integer_to_json(s[d])}});
  return rows;
}

inline json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.to_rows()) {
    json row = json::array();
    for (const auto& v : r) row.push_back(integer_to_json(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json euclid_to_json(const EuclidFactorization& r) {
  return {{"s1", integer_to_json(r.s1)}, {"s2", integer_to_json(r.s2)}, {"a", integer_to_json(r.a)},
          {"g", integer_to_json(r.g)},   {"e", integer_to_json(r.e)},   {"d", integer_to_json(r.d)},
          {"A", matrix_to_json(r.A)},    {"B", matrix_to_json(r.B)},    {"Bp", matrix_to_json(r.Bp)},
          {"C", matrix_to_json(r.C)},    {"verified", true}};
}

inline json torus_to_json(const TorusReduction& t) {
  return {{"g", integer_to_json(t.g)}, {"M", matrix_to_json(t.M)}, {"verified", true}};
}

}  // namespace wittn
