#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wittn/arith.hpp"
#include "wittn/error.hpp"
#include "wittn/polynomial.hpp"
#include "wittn/rings.hpp"

namespace wittn {

enum class WittOpKind { Sum, Product, Negation, Frobenius };

/// A Witt-vector operation realised by universal integer polynomials.
struct WittOp {
  WittOpKind kind = WittOpKind::Sum;
  std::uint64_t e = 1;  // Frobenius index; 1 for the other ops

  static WittOp sum() { return {WittOpKind::Sum, 1}; }
  static WittOp product() { return {WittOpKind::Product, 1}; }
  static WittOp negation() { return {WittOpKind::Negation, 1}; }
  static WittOp frobenius(std::uint64_t e) {
    if (e < 1) throw DomainError("frobenius index must be >= 1");
    return {WittOpKind::Frobenius, e};
  }

  bool binary() const { return kind == WittOpKind::Sum || kind == WittOpKind::Product; }

  std::string name() const {
    switch (kind) {
      case WittOpKind::Sum: return "sum";
      case WittOpKind::Product: return "product";
      case WittOpKind::Negation: return "negation";
      case WittOpKind::Frobenius: return "frobenius(" + std::to_string(e) + ")";
    }
    return "?";
  }

  friend auto operator<=>(const WittOp&, const WittOp&) = default;
};

/// The polynomial giving output coordinate d of an operation.
///
/// Variables are X_u for u in `support` followed (for binary ops) by Y_u for u in `support`,
/// where support is the divisors of d, or of e*d for Frobenius(e).
struct UniversalPolynomial {
  WittOp op;
  std::uint64_t d = 1;
  std::vector<std::uint64_t> support;
  IntPoly poly;

  std::size_t nvars() const { return op.binary() ? 2 * support.size() : support.size(); }

  std::vector<std::string> variable_names() const {
    std::vector<std::string> names;
    for (auto u : support) names.push_back("X" + std::to_string(u));
    if (op.binary())
      for (auto u : support) names.push_back("Y" + std::to_string(u));
    return names;
  }
};

/// Universal polynomials of an operation over a one-dimensional truncation set.
/// For Frobenius(e) the outputs are indexed by set/e = { d : e*d in set }.
struct UniversalPolynomialTable {
  WittOp op;
  std::vector<std::uint64_t> set;
  std::vector<std::uint64_t> outputs;
  std::vector<std::shared_ptr<const UniversalPolynomial>> polys;  // aligned with outputs
};

namespace detail {

/// Ghost polynomial w_m = sum_{u | m} u * V_u^{m/u}, with V_u = variable offset + position of u.
inline IntPoly ghost_polynomial(std::uint64_t m, const std::vector<std::uint64_t>& support, std::size_t nvars,
                                std::size_t offset) {
  IntPoly w(nvars);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const auto u = support[k];
    if (m % u != 0) continue;
    w = w + Integer(u) * IntPoly::variable(nvars, offset + k, static_cast<std::uint16_t>(m / u));
  }
  return w;
}

inline std::size_t position(const std::vector<std::uint64_t>& sorted, std::uint64_t v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  if (it == sorted.end() || *it != v) throw InternalVerificationFailure("universal: missing support element");
  return static_cast<std::size_t>(it - sorted.begin());
}

inline std::string hex_fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace detail

inline nlohmann::json table_to_json(const UniversalPolynomialTable& t);
inline UniversalPolynomialTable table_from_json(const nlohmann::json& j);

/// Process-wide write-once cache of universal polynomials.
///
/// Entries depend only on (op, d); tables are assembled from them and cached by
/// (set, op). Concurrent callers may both compute an entry; the first insert wins and
/// both results are identical. If WITT_CACHE_DIR is set, tables are also persisted there.
class UniversalCache {
 public:
  static UniversalCache& instance() {
    static UniversalCache cache;
    return cache;
  }

  std::shared_ptr<const UniversalPolynomial> polynomial(WittOp op, std::uint64_t d) {
    if (d < 1) throw DomainError("universal polynomial index must be >= 1");
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find({op, d}); it != entries_.end()) return it->second;
    }
    auto fresh = std::make_shared<const UniversalPolynomial>(compute(op, d));
    std::lock_guard lock(mutex_);
    return entries_.emplace(std::make_pair(op, d), std::move(fresh)).first->second;
  }

  std::shared_ptr<const UniversalPolynomialTable> table(const std::vector<std::uint64_t>& set, WittOp op) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = tables_.find({set, op}); it != tables_.end()) return it->second;
    }
    std::shared_ptr<const UniversalPolynomialTable> fresh;
    if (auto loaded = load_persisted(set, op)) {
      fresh = std::make_shared<const UniversalPolynomialTable>(std::move(*loaded));
    } else {
      fresh = std::make_shared<const UniversalPolynomialTable>(build_table(set, op));
      persist(*fresh);
    }
    std::lock_guard lock(mutex_);
    return tables_.emplace(std::make_pair(set, op), std::move(fresh)).first->second;
  }

  /// Computes a table from scratch without touching the cache.
  UniversalPolynomialTable build_table(const std::vector<std::uint64_t>& set, WittOp op) {
    check_truncation(set);
    UniversalPolynomialTable t{op, set, {}, {}};
    for (auto d : set) {
      if (op.kind == WittOpKind::Frobenius) {
        if (!std::binary_search(set.begin(), set.end(), d * op.e)) continue;
      }
      t.outputs.push_back(d);
    }
    for (auto d : t.outputs) t.polys.push_back(polynomial(op, d));
    return t;
  }

  /// Drops every in-memory entry.
  void clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
    tables_.clear();
  }

  static UniversalPolynomial compute(WittOp op, std::uint64_t d) {
    UniversalPolynomial out;
    out.op = op;
    out.d = d;
    const std::uint64_t top = op.kind == WittOpKind::Frobenius ? op.e * d : d;
    out.support = divisors(top);
    const std::size_t k = out.support.size();
    const std::size_t nv = out.nvars();

    IntPoly target(nv);
    switch (op.kind) {
      case WittOpKind::Sum:
        target = detail::ghost_polynomial(d, out.support, nv, 0) + detail::ghost_polynomial(d, out.support, nv, k);
        break;
      case WittOpKind::Product:
        target = detail::ghost_polynomial(d, out.support, nv, 0) * detail::ghost_polynomial(d, out.support, nv, k);
        break;
      case WittOpKind::Negation:
        target = -detail::ghost_polynomial(d, out.support, nv, 0);
        break;
      case WittOpKind::Frobenius:
        target = detail::ghost_polynomial(op.e * d, out.support, nv, 0);
        break;
    }

    // x_d = (w_d - sum_{t | d, t < d} t * x_t^{d/t}) / d
    for (auto t : divisors(d)) {
      if (t == d) break;
      auto lower = instance().polynomial(op, t);
      std::vector<std::size_t> map(lower->nvars());
      const std::size_t lk = lower->support.size();
      for (std::size_t j = 0; j < lk; ++j) {
        const auto pos = detail::position(out.support, lower->support[j]);
        map[j] = pos;
        if (op.binary()) map[lk + j] = k + pos;
      }
      target = target - Integer(t) * lower->poly.rename(nv, map).pow(d / t);
    }
    try {
      out.poly = IntPolyRing(out.variable_names()).div_exact(target, Integer(d));
    } catch (const NonIntegralDivision& err) {
      throw InternalVerificationFailure("universal polynomial " + op.name() + " at " + std::to_string(d) +
                                        " failed integrality: " + err.what());
    }
    return out;
  }

 private:
  UniversalCache() = default;

  static void check_truncation(const std::vector<std::uint64_t>& set) {
    if (!std::is_sorted(set.begin(), set.end()) || std::adjacent_find(set.begin(), set.end()) != set.end())
      throw DomainError("universal tables need a sorted set without duplicates");
    for (auto d : set) {
      if (d == 0) throw DomainError("truncation set elements must be positive");
      for (auto t : divisors(d))
        if (!std::binary_search(set.begin(), set.end(), t))
          throw DomainError("set is not divisor-closed: missing " + std::to_string(t));
    }
  }

  static std::string key_string(const std::vector<std::uint64_t>& set, WittOp op) {
    nlohmann::json k = {{"op", op.name()}, {"set", set}};
    return k.dump();
  }

  static std::optional<std::filesystem::path> persist_path(const std::vector<std::uint64_t>& set, WittOp op) {
    const char* dir = std::getenv("WITT_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return std::filesystem::path(dir) / ("table-" + detail::hex_fnv(key_string(set, op)) + ".json");
  }

  std::optional<UniversalPolynomialTable> load_persisted(const std::vector<std::uint64_t>& set, WittOp op) {
    auto path = persist_path(set, op);
    if (!path || !std::filesystem::exists(*path)) return std::nullopt;
    std::ifstream in(*path);
    nlohmann::json j;
    try {
      in >> j;
      auto t = table_from_json(j);
      if (t.set != set || t.op != op) return std::nullopt;  // hash collision
      return t;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void persist(const UniversalPolynomialTable& t) {
    auto path = persist_path(t.set, t.op);
    if (!path) return;
    std::error_code ec;
    std::filesystem::create_directories(path->parent_path(), ec);
    auto tmp = *path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) return;
      out << table_to_json(t).dump() << "\n";
    }
    std::filesystem::rename(tmp, *path, ec);
  }

  std::mutex mutex_;
  std::map<std::pair<WittOp, std::uint64_t>, std::shared_ptr<const UniversalPolynomial>> entries_;
  std::map<std::pair<std::vector<std::uint64_t>, WittOp>, std::shared_ptr<const UniversalPolynomialTable>> tables_;
};

/// Table for a one-dimensional truncation set, from the shared cache.
inline std::shared_ptr<const UniversalPolynomialTable> universal_polys(const std::vector<std::uint64_t>& set,
                                                                       WittOp op) {
  return UniversalCache::instance().table(set, op);
}

inline nlohmann::json op_to_json(WittOp op) {
  static const char* names[] = {"sum", "product", "negation", "frobenius"};
  return {{"kind", names[static_cast<int>(op.kind)]}, {"e", op.e}};
}

inline WittOp op_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "sum") return WittOp::sum();
  if (kind == "product") return WittOp::product();
  if (kind == "negation") return WittOp::negation();
  if (kind == "frobenius") return WittOp::frobenius(j.at("e").get<std::uint64_t>());
  throw DomainError("unknown op '" + kind + "'");
}

/// Canonical JSON: terms in descending grlex order as [exponents, "coefficient"].
inline nlohmann::json table_to_json(const UniversalPolynomialTable& t) {
  nlohmann::json polys = nlohmann::json::array();
  for (const auto& p : t.polys) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p->poly.terms())
      terms.push_back({std::vector<std::uint16_t>(e.begin(), e.end()), c.get_str()});
    polys.push_back({{"d", p->d}, {"support", p->support}, {"terms", std::move(terms)}});
  }
  return {{"op", op_to_json(t.op)}, {"set", t.set}, {"outputs", t.outputs}, {"polys", std::move(polys)}};
}

inline UniversalPolynomialTable table_from_json(const nlohmann::json& j) {
  UniversalPolynomialTable t;
  t.op = op_from_json(j.at("op"));
  t.set = j.at("set").get<std::vector<std::uint64_t>>();
  t.outputs = j.at("outputs").get<std::vector<std::uint64_t>>();
  for (const auto& pj : j.at("polys")) {
    UniversalPolynomial p;
    p.op = t.op;
    p.d = pj.at("d").get<std::uint64_t>();
    p.support = pj.at("support").get<std::vector<std::uint64_t>>();
    std::vector<IntPoly::Term> terms;
    for (const auto& tj : pj.at("terms")) {
      auto ex = tj.at(0).get<std::vector<std::uint16_t>>();
      if (ex.size() != p.nvars()) throw DomainError("table term has wrong arity");
      terms.emplace_back(Exponents(ex.begin(), ex.end()), parse_integer(tj.at(1).get<std::string>()));
    }
    p.poly = IntPoly::from_terms(p.nvars(), std::move(terms));
    t.polys.push_back(std::make_shared<const UniversalPolynomial>(std::move(p)));
  }
  if (t.polys.size() != t.outputs.size()) throw DomainError("table outputs and polys disagree");
  return t;
}

}  // namespace wittn
